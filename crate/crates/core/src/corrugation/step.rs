use rayon::prelude::*;
use serde::Serialize;

use super::frame::FramePoint;
use super::loops::loop_integrals_jet;
use crate::bessel::{bessel_i0_minus_one, bessel_i_derivative, bessel_i_seq, inverse_i0_excess};
use crate::defect::LinearFormZ;
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::metric_grid::{c0_distance, pullback, taylor_jets, DerivativeMode, Immersion, MetricField, ScalarField, Sym2};
use crate::minkowski::lorentz_dot;

/// One corrugation: oscillate along `form` with frequency `n_corr`,
/// absorbing the defect `eta · form ⊗ form`.
#[derive(Clone, Debug)]
pub struct CorrugationStep {
    pub form: LinearFormZ,
    pub eta: ScalarField,
    pub n_corr: u64,
}

impl CorrugationStep {
    pub fn new(form: LinearFormZ, eta: ScalarField, n_corr: u64) -> Result<Self> {
        if n_corr == 0 {
            return Err(Error::DegenerateInput("corrugation number must be at least 1".into()));
        }
        if let Some(node) = eta.values().iter().position(|&v| v < 0.0) {
            return Err(Error::DegenerateInput(format!("negative defect coefficient at node {node}")));
        }
        Ok(CorrugationStep { form, eta, n_corr })
    }

    /// Fractional part of `N·ℓ(p)` at node `(i, j)`, computed exactly.
    pub fn phase(&self, n_grid: usize, i: usize, j: usize) -> f64 {
        let n = n_grid as i128;
        let lin = self.form.a() as i128 * i as i128 + self.form.b() as i128 * j as i128;
        let m = (self.n_corr as i128 * lin).rem_euclid(n);
        m as f64 / n as f64
    }

    /// `μ = f*h − η ℓ⊗ℓ`.
    pub fn reduced_metric(&self, f: &Immersion) -> Result<MetricField> {
        let g = pullback(f);
        g.grid().check_same(&self.eta.grid())?;
        let sq = self.form.square();
        let values = g.values().iter().zip(self.eta.values()).map(|(&m, &e)| m - sq * e).collect();
        Ok(MetricField::new(g.grid(), values))
    }
}

/// Per-stage numbers kept for diagnostics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StepDiagnostics {
    pub max_alpha: f64,
    pub max_displacement: f64,
}

/// Jets of `α` solving `I₀(α) − 1 = excess`, by Newton iteration on jets.
fn amplitude_jet(excess: &Jet, node: usize) -> Result<Jet> {
    let order = excess.order();
    let a0 = inverse_i0_excess(excess.value()).map_err(|e| match e {
        Error::TargetBelowOne { .. } => Error::MetricNotRiemannian { node, slack: f64::NAN },
        other => other,
    })?;
    if a0 == 0.0 || order == 0 {
        return Ok(Jet::constant(a0, order));
    }
    let seq = bessel_i_seq(a0, order + 2);
    let mut i0 = vec![bessel_i0_minus_one(a0)];
    i0.extend((1..=order).map(|k| bessel_i_derivative(&seq, 0, k)));
    let i1: Vec<f64> = (0..=order).map(|k| bessel_i_derivative(&seq, 1, k)).collect();
    let mut alpha = Jet::constant(a0, order);
    // each pass fixes at least one more order
    for _ in 0..=order {
        let mut residual = alpha.compose(&i0) - *excess;
        residual = residual.increment();
        alpha = alpha - residual * alpha.compose(&i1).recip();
    }
    Ok(alpha)
}

/// Periodic increment `(r/N)(C u + S n)` at one node, as jets one order
/// below the input map.
fn node_increment(
    tx: &[Jet; 3],
    ty: &[Jet; 3],
    eta: &Jet,
    step: &CorrugationStep,
    t0: f64,
    node: usize,
) -> Result<([Jet; 3], f64)> {
    let dot = |p: &[Jet; 3], q: &[Jet; 3]| p[0] * q[0] + p[1] * q[1] - p[2] * q[2];
    let (e, f, g) = (dot(tx, tx), dot(tx, ty), dot(ty, ty));
    let det = e * g - f * f;
    if !(e.value() > 0.0 && det.value() > 0.0) {
        return Err(Error::NotSpacelike { node });
    }
    let (a, b) = (step.form.a() as f64, step.form.b() as f64);
    let det_inv = det.recip();
    let d2 = (g * (a * a) - f * (2.0 * a * b) + e * (b * b)) * det_inv;
    let d = d2.sqrt();
    let w_scale = det_inv * d.recip();
    let wx = (g * a - f * b) * w_scale;
    let wy = (e * b - f * a) * w_scale;
    let u: [Jet; 3] = std::array::from_fn(|c| tx[c] * wx + ty[c] * wy);

    let cross = [
        tx[1] * ty[2] - tx[2] * ty[1],
        tx[2] * ty[0] - tx[0] * ty[2],
        tx[0] * ty[1] - tx[1] * ty[0],
    ];
    let normal_dir = [cross[0], cross[1], -cross[2]];
    let scale = det.sqrt().recip() * normal_dir[2].value().signum();
    let n: [Jet; 3] = std::array::from_fn(|c| normal_dir[c] * scale);

    let s = (*eta * d2 * -1.0) + 1.0;
    if s.value() <= 0.0 {
        return Err(Error::MetricNotRiemannian { node, slack: 1.0 / d2.value() - eta.value() });
    }
    let root = s.sqrt();
    let r = root * d.recip();
    let excess = *eta * d2 * (root * (root + 1.0)).recip();
    let alpha = amplitude_jet(&excess, node)?;

    let order = alpha.order();
    let nc = step.n_corr as f64;
    let t = Jet::affine(t0, nc * a, nc * b, order);
    let (c_int, s_int) = loop_integrals_jet(&alpha, &t);
    let amp = r * (1.0 / nc);
    Ok((std::array::from_fn(|c| (u[c] * c_int + n[c] * s_int) * amp), alpha.value()))
}

fn stage_inputs(f: &Immersion, node: usize) -> ([Jet; 3], [Jet; 3]) {
    match f.mode() {
        DerivativeMode::Analytic => {
            let full = f.full_jets(node);
            (full.map(|c| c.dx()), full.map(|c| c.dy()))
        }
        DerivativeMode::CenteredDifference => {
            let (tx, ty) = f.tangents(node);
            (tx.to_array().map(|v| Jet::constant(v, 0)), ty.to_array().map(|v| Jet::constant(v, 0)))
        }
    }
}

/// One corrugation step with diagnostics.
pub fn corrugate_with_diagnostics(f: &Immersion, step: &CorrugationStep) -> Result<(Immersion, StepDiagnostics)> {
    let grid = f.grid();
    grid.check_same(&step.eta.grid())?;
    let out_order = match f.mode() {
        DerivativeMode::Analytic => f.jet_order() - 1,
        DerivativeMode::CenteredDifference => 0,
    };
    let eta_jets = taylor_jets(&step.eta, out_order);
    let results: Vec<Result<([Jet; 3], f64, f64)>> = (0..grid.len())
        .into_par_iter()
        .map(|node| {
            let (i, j) = grid.coords(node);
            let (tx, ty) = stage_inputs(f, node);
            let eta = eta_jets[node];
            let base = f.periodic_jets(node).map(|c| c.truncate(out_order));
            if step.eta.at(node) == 0.0 {
                // α = 0 exactly, so the loop collapses to its mean
                return Ok((base, 0.0, 0.0));
            }
            let (inc, alpha) = node_increment(&tx, &ty, &eta, step, step.phase(grid.n(), i, j), node)?;
            let shift = (inc[0].value().powi(2) + inc[1].value().powi(2) + inc[2].value().powi(2)).sqrt();
            Ok((std::array::from_fn(|c| base[c] + inc[c]), shift, alpha))
        })
        .collect();
    let mut periodic = Vec::with_capacity(grid.len());
    let mut max_displacement: f64 = 0.0;
    let mut max_alpha: f64 = 0.0;
    for r in results {
        let (p, shift, alpha) = r?;
        periodic.push(p);
        max_displacement = max_displacement.max(shift);
        max_alpha = max_alpha.max(alpha);
    }
    let out = Immersion::from_jets(grid, f.linear_part(), periodic, DerivativeMode::Analytic);
    Ok((out, StepDiagnostics { max_alpha, max_displacement }))
}

/// `F = f + (1/N) ∫₀^{Nℓ(p)} (γ − γ̄) ds`.
///
/// With analytic derivatives the result carries jets one order lower than
/// `f`; in centered-difference mode only node values are produced.
pub fn corrugate_once(f: &Immersion, step: &CorrugationStep) -> Result<Immersion> {
    corrugate_with_diagnostics(f, step).map(|(im, _)| im)
}

/// C⁰ distance between `L*h` and `μ`, where `L = df + (γ(Nℓ) − γ̄) ⊗ dℓ`.
pub fn target_differential_check(f: &Immersion, step: &CorrugationStep) -> Result<f64> {
    let grid = f.grid();
    let mu = step.reduced_metric(f)?;
    let (a, b) = (step.form.a() as f64, step.form.b() as f64);
    let mut values = Vec::with_capacity(grid.len());
    for node in 0..grid.len() {
        let (i, j) = grid.coords(node);
        let (tx, ty) = f.tangents(node);
        let fr = FramePoint::from_tangents(tx, ty, step.form, node)?.with_amplitudes(step.eta.at(node), node)?;
        let jump = fr.loop_point(step.phase(grid.n(), i, j)) - fr.loop_mean();
        let (lx, ly) = (tx + jump * a, ty + jump * b);
        values.push(Sym2::new(lorentz_dot(lx, lx), lorentz_dot(lx, ly), lorentz_dot(ly, ly)));
    }
    c0_distance(&MetricField::new(grid, values), &mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrugation::loops::loop_integrals;
    use crate::metric_grid::PeriodicGrid;
    use std::f64::consts::TAU;
    use crate::minkowski::MinkVector;

    #[test]
    fn amplitude_jet_inverts_i0() {
        let x = Jet::var_x(0.3, 3);
        let y = Jet::var_y(0.1, 3);
        let excess = (x * 2.0 + y * y).exp() * 0.5;
        let alpha = amplitude_jet(&excess, 0).unwrap();
        let seq = bessel_i_seq(alpha.value(), 6);
        let mut derivs = vec![bessel_i0_minus_one(alpha.value())];
        derivs.extend((1..=3).map(|k| bessel_i_derivative(&seq, 0, k)));
        let back = alpha.compose(&derivs);
        for (p, q) in back.coeffs().iter().zip(excess.coeffs()) {
            assert!((p - q).abs() < 1e-12, "{p} vs {q}");
        }
    }

    #[test]
    fn phase_is_exact() {
        let grid = PeriodicGrid::new(8).unwrap();
        let step = CorrugationStep::new(LinearFormZ::DX, ScalarField::constant(grid, 0.1), 100).unwrap();
        assert_eq!(step.phase(8, 3, 5), 0.5); // 300/8 = 37.5
        let step = CorrugationStep::new(LinearFormZ::ANTIDIAGONAL, ScalarField::constant(grid, 0.1), 3).unwrap();
        assert_eq!(step.phase(8, 1, 2), 5.0 / 8.0); // 3·(1 − 2) = −3 ≡ 5
    }

    #[test]
    fn node_values_agree_with_frame_route() {
        let grid = PeriodicGrid::new(16).unwrap();
        let f = Immersion::from_fn(grid, [[1.0, 0.0, 0.2], [0.0, 1.0, 0.0]], 2, |x, y| {
            let z = Jet::constant(0.0, x.order());
            [z, (x * TAU).sin() * 0.05, (y * TAU).cos() * 0.1]
        });
        let eta = ScalarField::from_fn(grid, |x, _| 0.15 + 0.05 * (TAU * x).cos());
        let step = CorrugationStep::new(LinearFormZ::DIAGONAL, eta, 7).unwrap();
        let out = corrugate_once(&f, &step).unwrap();
        for node in [0, 17, 100, 255] {
            let (i, j) = grid.coords(node);
            let (tx, ty) = f.tangents(node);
            let fr = FramePoint::from_tangents(tx, ty, step.form, node).unwrap().with_amplitudes(step.eta.at(node), node).unwrap();
            let (c, s) = loop_integrals(fr.alpha, step.phase(16, i, j));
            let expect: MinkVector = f.periodic_value(node) + (fr.u * c + fr.n * s) * (fr.r / 7.0);
            assert!((out.periodic_value(node) - expect).euclid_norm() < 1e-14);
        }
    }
}
