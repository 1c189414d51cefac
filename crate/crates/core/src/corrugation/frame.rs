use serde::{Deserialize, Serialize};

use crate::bessel::inverse_i0_excess;
use crate::defect::LinearFormZ;
use crate::error::{Error, Result};
use crate::metric_grid::Immersion;
use crate::minkowski::{lorentz_dot, timelike_unit_normal, MinkVector};

/// Orthonormal frame adapted to a linear form, with the loop amplitudes.
///
/// `v` spans the image of the kernel of the form, `u` completes it to an
/// orthonormal pair for the induced metric with `dϖ(u) > 0`, and `n` is
/// the future unit normal. `r` and `alpha` default to the values for a
/// vanishing defect (`r = 1/dpi_u`, `alpha = 0`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FramePoint {
    pub v: MinkVector,
    pub u: MinkVector,
    pub n: MinkVector,
    pub dpi_u: f64,
    pub r: f64,
    pub alpha: f64,
}

impl FramePoint {
    /// Frame from the two tangent vectors at a point.
    pub fn from_tangents(tx: MinkVector, ty: MinkVector, form: LinearFormZ, node: usize) -> Result<Self> {
        let (e, f, g) = (lorentz_dot(tx, tx), lorentz_dot(tx, ty), lorentz_dot(ty, ty));
        let det = e * g - f * f;
        if !(e > 0.0 && det > 0.0) {
            return Err(Error::NotSpacelike { node });
        }
        let (a, b) = (form.a() as f64, form.b() as f64);
        // |ℓ| in the dual metric; w = g⁻¹ℓ / |ℓ| is the unit vector with ℓ(w) = |ℓ|.
        let dpi_u = ((a * a * g - 2.0 * a * b * f + b * b * e) / det).sqrt();
        let wx = (g * a - f * b) / (det * dpi_u);
        let wy = (e * b - f * a) / (det * dpi_u);
        let u = tx * wx + ty * wy;
        let kernel_norm = (b * b * e - 2.0 * a * b * f + a * a * g).sqrt();
        let v = (tx * -b + ty * a) * (1.0 / kernel_norm);
        let n = timelike_unit_normal(tx, ty).map_err(|_| Error::NotSpacelike { node })?;
        Ok(FramePoint { v, u, n, dpi_u, r: 1.0 / dpi_u, alpha: 0.0 })
    }

    /// Fills `r` and `alpha` for the defect coefficient `eta`.
    pub fn with_amplitudes(mut self, eta: f64, node: usize) -> Result<Self> {
        let (r, alpha) = amplitudes(self.dpi_u, eta, node)?;
        self.r = r;
        self.alpha = alpha;
        Ok(self)
    }

    /// Loop value `γ(s) = r (cosh θ u + sinh θ n)`, `θ = α cos 2πs`.
    pub fn loop_point(&self, s: f64) -> MinkVector {
        let theta = self.alpha * (2.0 * std::f64::consts::PI * s).cos();
        (self.u * theta.cosh() + self.n * theta.sinh()) * self.r
    }

    /// Loop average `γ̄ = u / dϖ(u)`.
    pub fn loop_mean(&self) -> MinkVector {
        self.u * (1.0 / self.dpi_u)
    }
}

/// `(r, α)` with `r² = 1/d² − η` and `I₀(α) = 1/(r d)`.
///
/// Written in terms of `s = 1 − η d²` so that `η = 0` gives `α = 0` exactly.
pub(crate) fn amplitudes(dpi_u: f64, eta: f64, node: usize) -> Result<(f64, f64)> {
    let d2 = dpi_u * dpi_u;
    let s = 1.0 - eta * d2;
    if s <= 0.0 {
        return Err(Error::MetricNotRiemannian { node, slack: 1.0 / d2 - eta });
    }
    let root = s.sqrt();
    let r = root / dpi_u;
    let excess = eta * d2 / (root * (1.0 + root));
    if excess < -1e-12 {
        return Err(Error::TargetBelowOne { target: 1.0 + excess });
    }
    Ok((r, inverse_i0_excess(excess)?))
}

/// Adapted frames at every node (amplitudes for a vanishing defect).
pub fn adapted_frame(f: &Immersion, form: LinearFormZ) -> Result<Vec<FramePoint>> {
    (0..f.grid().len())
        .map(|k| {
            let (tx, ty) = f.tangents(k);
            FramePoint::from_tangents(tx, ty, form, k)
        })
        .collect()
}

/// `(r, α)` per node.
pub fn solve_amplitudes(frames: &[FramePoint], eta: &[f64]) -> Result<Vec<(f64, f64)>> {
    frames
        .iter()
        .zip(eta)
        .enumerate()
        .map(|(k, (fr, &e))| amplitudes(fr.dpi_u, e, k))
        .collect()
}
