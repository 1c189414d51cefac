use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{build_target_metric, conformal_factor, hyp_distance, torus_modulus_detailed, UHPoint};
use crate::corrugation::{run_pipeline, NPolicy};
use crate::defect::{cone_margin, decompose, default_dictionary};
use crate::error::{Error, Result};
use crate::metric_grid::{c0_distance, pullback, teich_distance_bound, Immersion, MetricField, ScalarField};

/// Parameters of the conformal search.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Hyperbolic radius of the ball `B_ρ(w0)`.
    pub rho: f64,
    /// C⁰ budget for the whole corrugation pipeline.
    pub epsilon: f64,
    /// Scale of the target metrics; `None` picks it with [`choose_delta`].
    pub delta: Option<f64>,
    pub damping: f64,
    pub max_iter: usize,
    /// Stop once `hyp_distance(G(w), w0)` is below this.
    pub tol: f64,
    /// Total budget of modulus evaluations, fallback included.
    pub max_evaluations: usize,
    /// Corrugation numbers per dictionary term; `None` calibrates them.
    pub n_corr: Option<Vec<u64>>,
    pub seed: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            rho: 0.1,
            epsilon: 2e-3,
            delta: None,
            damping: 1.0,
            max_iter: 12,
            tol: 2e-3,
            max_evaluations: 25,
            n_corr: None,
            seed: 0,
        }
    }
}

impl SearchConfig {
    fn validate(&self) -> Result<()> {
        let positive = self.rho >= 0.0
            && self.epsilon > 0.0
            && self.delta.is_none_or(|d| d > 0.0)
            && self.damping > 0.0
            && self.damping <= 1.0
            && self.max_iter > 0
            && self.tol > 0.0
            && self.max_evaluations > 0
            && self.n_corr.as_ref().is_none_or(|ns| ns.len() == default_dictionary().len() && ns.iter().all(|&n| n > 0));
        if positive {
            Ok(())
        } else {
            Err(Error::DegenerateInput(format!("invalid search configuration {self:?}")))
        }
    }
}

/// One modulus evaluation `G(w)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceRow {
    pub iter: usize,
    pub w: UHPoint,
    pub g: UHPoint,
    /// `hyp_distance(G(w), w0)`.
    pub hyp_dist: f64,
    /// `c0_distance(F_w*h, g_w)`.
    pub c0_err: f64,
    /// `hyp_distance(G(w), w)`.
    pub modulus_offset: f64,
    /// `½ log dilatation_id(g_w, F_w*h)`.
    pub dilatation_bound: f64,
    /// The modulus solver conjugated its raw period ratio.
    pub flipped: bool,
    pub refinement: bool,
    pub best_so_far: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct SearchTrace {
    pub rows: Vec<TraceRow>,
}

impl SearchTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,re_w,im_w,re_G,im_G,hyp_dist,c0_err\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.iter,
                r.w.re(),
                r.w.im(),
                r.g.re(),
                r.g.im(),
                r.hyp_dist,
                r.c0_err
            )
            .unwrap();
        }
        out
    }

    fn push(&mut self, mut row: TraceRow) {
        row.iter = self.rows.len();
        row.best_so_far = self.rows.last().map_or(row.hyp_dist, |r| r.best_so_far.min(row.hyp_dist));
        self.rows.push(row);
    }
}

/// Result of a successful search.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub w_star: UHPoint,
    pub g_star: UHPoint,
    pub immersion: Immersion,
    pub trace: SearchTrace,
    pub delta: f64,
    /// Corrugation numbers per dictionary term, fixed before the search.
    pub n_corr: Vec<u64>,
    /// Pipeline runs spent choosing `n_corr` (not modulus evaluations).
    pub calibration_runs: usize,
    pub warnings: Vec<String>,
}

impl SearchOutcome {
    pub fn evaluations(&self) -> usize {
        self.trace.rows.len()
    }
}

/// Cayley chart of ℍ² centered at `w0`: `z = (w − w0)/(w − w̄0)`, so
/// hyperbolic distance to `w0` is `2 artanh |z|`.
fn to_disc(w: Complex64, w0: UHPoint) -> Complex64 {
    let c = w0.to_complex();
    (w - c) / (w - c.conj())
}

fn from_disc(z: Complex64, w0: UHPoint) -> Complex64 {
    let c = w0.to_complex();
    (c - z * c.conj()) / (1.0 - z)
}

/// Nearest point of `B_ρ(w0)` along the geodesic from `w0`; points outside
/// ℍ² are pulled back in along the same chart ray.
pub fn project_to_ball(w: Complex64, w0: UHPoint, rho: f64) -> UHPoint {
    let radius = (0.5 * rho).tanh();
    let mut z = to_disc(w, w0);
    if !z.is_finite() {
        return w0;
    }
    if z.norm() > radius {
        z *= radius / z.norm();
    }
    UHPoint::from_complex(from_disc(z, w0)).unwrap_or(w0)
}

/// `count` points on the boundary circle of `B_ρ(w0)`, rotated by `phase` turns.
pub fn ball_boundary(w0: UHPoint, rho: f64, count: usize, phase: f64) -> Vec<UHPoint> {
    let radius = (0.5 * rho).tanh();
    (0..count)
        .map(|k| {
            let angle = std::f64::consts::TAU * (k as f64 + phase) / count as f64;
            let z = Complex64::from_polar(radius, angle);
            UHPoint::from_complex(from_disc(z, w0)).unwrap_or(w0)
        })
        .collect()
}

/// Outcome of [`choose_delta_with`].
#[derive(Clone, Copy, Debug, Serialize)]
pub struct DeltaChoice {
    pub delta: f64,
    /// Smallest cone margin of `f*h − g_w` over the verification samples.
    pub verified_margin: f64,
}

/// [`choose_delta_with`] with seed 0.
pub fn choose_delta(f: &Immersion, w0: UHPoint, rho: f64) -> Result<f64> {
    Ok(choose_delta_with(f, w0, rho, 0)?.delta)
}

/// Largest `2^{−k}` keeping `f*h − g_w` inside the decomposition cone on 32
/// boundary samples of `B_ρ(w0)` plus the center, halved for safety and
/// re-verified on 128 boundary samples.
pub fn choose_delta_with(f: &Immersion, w0: UHPoint, rho: f64, seed: u64) -> Result<DeltaChoice> {
    let induced = pullback(f);
    induced.require_positive_definite()?;
    let lambda2 = conformal_factor(f);
    let phase: f64 = ChaCha8Rng::seed_from_u64(seed).gen();
    let margin_over = |points: &[UHPoint], delta: f64| -> f64 {
        points
            .iter()
            .map(|&w| {
                let defect = induced.sub(&build_target_metric(&lambda2, w, delta)).expect("same grid");
                if defect.is_positive_definite() {
                    cone_margin(&defect)
                } else {
                    f64::NEG_INFINITY
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let mut coarse = ball_boundary(w0, rho, 32, phase);
    coarse.push(w0);
    let mut fine = ball_boundary(w0, rho, 128, phase);
    fine.push(w0);

    let floor = 2f64.powi(-40);
    let mut delta = 1.0;
    while delta >= floor && margin_over(&coarse, delta) <= 0.0 {
        delta *= 0.5;
    }
    delta *= 0.5;
    while delta >= floor {
        let verified_margin = margin_over(&fine, delta);
        if verified_margin > 0.0 {
            return Ok(DeltaChoice { delta, verified_margin });
        }
        delta *= 0.5;
    }
    Err(Error::NoAdmissibleDelta)
}

struct Evaluation {
    row: TraceRow,
    immersion: Immersion,
}

struct Problem<'a> {
    f: &'a Immersion,
    induced: MetricField,
    lambda2: ScalarField,
    w0: UHPoint,
    delta: f64,
}

impl Problem<'_> {
    fn target(&self, w: UHPoint) -> MetricField {
        build_target_metric(&self.lambda2, w, self.delta)
    }

    fn corrugate(&self, w: UHPoint, policy: &NPolicy) -> Result<crate::corrugation::PipelineResult> {
        let defect = self.induced.sub(&self.target(w))?;
        let decomposition = decompose(&defect, &default_dictionary())?;
        run_pipeline(self.f, &decomposition, policy)
    }

    fn evaluate(&self, w: UHPoint, n_corr: &[u64]) -> Result<Evaluation> {
        let target = self.target(w);
        let result = self.corrugate(w, &NPolicy::Fixed(n_corr.to_vec()))?;
        let induced = pullback(&result.immersion);
        let modulus = torus_modulus_detailed(&induced)?;
        let row = TraceRow {
            iter: 0,
            w,
            g: modulus.w,
            hyp_dist: hyp_distance(modulus.w, self.w0),
            c0_err: c0_distance(&induced, &target)?,
            modulus_offset: hyp_distance(modulus.w, w),
            dilatation_bound: teich_distance_bound(&target, &induced)?,
            flipped: modulus.flipped,
            refinement: false,
            best_so_far: 0.0,
        };
        Ok(Evaluation { row, immersion: result.immersion })
    }
}

/// Automatic corrugation numbers at the center and four boundary points of
/// the ball, maximized per term.
fn calibrate(problem: &Problem<'_>, cfg: &SearchConfig) -> Result<(Vec<u64>, usize)> {
    let mut probes = ball_boundary(problem.w0, cfg.rho, 4, 0.0);
    probes.insert(0, problem.w0);
    let terms = default_dictionary().len();
    let mut n_corr = vec![0u64; terms];
    for w in &probes {
        let run = problem.corrugate(*w, &NPolicy::auto(cfg.epsilon))?;
        for (k, n) in run.n_per_term(terms).into_iter().enumerate() {
            n_corr[k] = n_corr[k].max(n.unwrap_or(0));
        }
    }
    let largest = n_corr.iter().copied().max().unwrap_or(0).max(1);
    n_corr.iter_mut().filter(|n| **n == 0).for_each(|n| *n = largest);
    Ok((n_corr, probes.len()))
}

/// Finds `w*` in `B_ρ(w0)` whose corrugated embedding has modulus `w0`.
///
/// `G(w)` is the modulus of the corrugation of `f` towards `δ λ² h_w`.
/// Corrugation numbers are calibrated once with the automatic policy at
/// the center and four boundary points of the ball and then held fixed, so
/// that `G` is a deterministic function of `w`. The damped iteration
/// `w ← w + damping (w0 − G(w))` runs while it improves; afterwards a 3×3
/// grid refinement around the best point uses the remaining budget.
pub fn conformal_search(f: &Immersion, w0: UHPoint, cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let delta = match cfg.delta {
        Some(d) => d,
        None => choose_delta_with(f, w0, cfg.rho, cfg.seed)?.delta,
    };
    let problem = Problem { f, induced: pullback(f), lambda2: conformal_factor(f), w0, delta };

    let (n_corr, calibration_runs) = match &cfg.n_corr {
        Some(ns) => (ns.clone(), 0),
        None => calibrate(&problem, cfg)?,
    };

    let mut trace = SearchTrace::default();
    let mut warnings = Vec::new();
    let mut best: Option<Evaluation> = None;
    let mut record = |mut e: Evaluation, refinement: bool, trace: &mut SearchTrace, best: &mut Option<Evaluation>| {
        e.row.refinement = refinement;
        if e.row.modulus_offset > cfg.rho {
            warnings.push(format!(
                "G moves {} by {:.3e} > rho at evaluation {}",
                e.row.w,
                e.row.modulus_offset,
                trace.rows.len()
            ));
        }
        trace.push(e.row);
        e.row = *trace.rows.last().unwrap();
        if best.as_ref().is_none_or(|b| e.row.hyp_dist < b.row.hyp_dist) {
            *best = Some(e);
        }
    };

    let mut w = w0;
    let mut stalled = 0;
    for _ in 0..cfg.max_iter.min(cfg.max_evaluations) {
        let previous_best = best.as_ref().map_or(f64::INFINITY, |b| b.row.hyp_dist);
        let e = problem.evaluate(w, &n_corr)?;
        let g = e.row.g;
        record(e, false, &mut trace, &mut best);
        let current = best.as_ref().unwrap().row.hyp_dist;
        if current <= cfg.tol {
            break;
        }
        stalled = if current < previous_best { 0 } else { stalled + 1 };
        if stalled >= 2 {
            break;
        }
        let step = w.to_complex() + cfg.damping * (w0.to_complex() - g.to_complex());
        w = project_to_ball(step, w0, cfg.rho);
    }

    let radius = (0.5 * cfg.rho).tanh();
    let mut spacing = 0.5 * radius.max(1e-6);
    while best.as_ref().unwrap().row.hyp_dist > cfg.tol && trace.rows.len() < cfg.max_evaluations {
        let center = to_disc(best.as_ref().unwrap().row.w.to_complex(), w0);
        let budget = cfg.max_evaluations - trace.rows.len();
        let mut candidates = Vec::new();
        for dj in -1..=1 {
            for di in -1..=1 {
                if di == 0 && dj == 0 {
                    continue;
                }
                let z = center + Complex64::new(di as f64, dj as f64) * spacing;
                let z = if z.norm() > radius { z * (radius / z.norm()) } else { z };
                if let Ok(p) = UHPoint::from_complex(from_disc(z, w0)) {
                    candidates.push(p);
                }
            }
        }
        candidates.truncate(budget);
        let evaluations =
            candidates.par_iter().map(|&p| problem.evaluate(p, &n_corr)).collect::<Result<Vec<_>>>()?;
        for e in evaluations {
            record(e, true, &mut trace, &mut best);
        }
        spacing *= 0.5;
    }

    let best = best.expect("at least one evaluation");
    if best.row.hyp_dist > cfg.tol {
        return Err(Error::SearchFailed { trace: Box::new(trace) });
    }
    Ok(SearchOutcome {
        w_star: best.row.w,
        g_star: best.row.g,
        immersion: best.immersion,
        trace,
        delta,
        n_corr,
        calibration_runs,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_grid::PeriodicGrid;

    fn plane(n: usize) -> Immersion {
        Immersion::plane(PeriodicGrid::new(n).unwrap(), 6)
    }

    #[test]
    fn chart_round_trip_and_projection() {
        let w0 = UHPoint::new(0.05, 1.0).unwrap();
        for p in ball_boundary(w0, 0.1, 7, 0.3) {
            assert!((hyp_distance(p, w0) - 0.1).abs() < 1e-12);
        }
        let far = Complex64::new(3.0, 0.2);
        let p = project_to_ball(far, w0, 0.1);
        assert!((hyp_distance(p, w0) - 0.1).abs() < 1e-12);
        let inside = UHPoint::new(0.06, 1.01).unwrap();
        assert!(hyp_distance(project_to_ball(inside.to_complex(), w0, 0.1), inside) < 1e-12);
        let below = project_to_ball(Complex64::new(0.0, -1.0), w0, 0.1);
        assert!(below.im() > 0.0 && hyp_distance(below, w0) <= 0.1 + 1e-12);
    }

    #[test]
    fn delta_for_the_plane() {
        let f = plane(8);
        let delta = choose_delta(&f, UHPoint::I, 0.1).unwrap();
        assert!(delta >= 0.25, "{delta}");
        let degenerate = choose_delta(&f, UHPoint::I, 0.0).unwrap();
        // single sample w0 = i: g = δ·id admissible for every δ < 1
        assert_eq!(degenerate, 0.25);
    }

    #[test]
    fn delta_is_rejected_for_a_non_spacelike_seed() {
        // a timelike direction along x makes the induced metric indefinite
        let grid = PeriodicGrid::new(8).unwrap();
        let f = Immersion::from_samples(grid, [[1.0, 0.0, 2.0], [0.0, 1.0, 0.0]], vec![Default::default(); 64]);
        assert!(choose_delta(&f, UHPoint::I, 0.1).is_err());
    }

    #[test]
    fn trace_csv_layout() {
        let mut trace = SearchTrace::default();
        let row = TraceRow {
            iter: 9,
            w: UHPoint::I,
            g: UHPoint::new(0.5, 2.0).unwrap(),
            hyp_dist: 0.25,
            c0_err: 1e-3,
            modulus_offset: 0.0,
            dilatation_bound: 0.0,
            flipped: false,
            refinement: false,
            best_so_far: 0.0,
        };
        trace.push(row);
        trace.push(TraceRow { hyp_dist: 0.5, ..row });
        assert_eq!(trace.to_csv(), "iter,re_w,im_w,re_G,im_G,hyp_dist,c0_err\n0,0,1,0.5,2,0.25,0.001\n1,0,1,0.5,2,0.5,0.001\n");
        assert_eq!(trace.rows[1].best_so_far, 0.25);
    }
}
