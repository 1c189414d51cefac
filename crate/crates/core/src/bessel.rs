//! Modified Bessel functions of the first kind, integer order.
//!
//! `I₀(α) = ∫₀¹ cosh(α cos 2πs) ds` is the loop-average function of the
//! corrugation amplitude equation; the higher orders appear in the
//! Fourier expansion of the loop antiderivative.

use crate::error::{Error, Result};

/// `I_n(x)` for `n = 0..=n_max`, by the power series
/// `Σ_m (x/2)^{2m+n} / (m! (m+n)!)`.
pub fn bessel_i_seq(x: f64, n_max: usize) -> Vec<f64> {
    let half = 0.5 * x;
    let q = half * half;
    let mut out = Vec::with_capacity(n_max + 1);
    let mut lead = 1.0; // (x/2)^n / n!
    for n in 0..=n_max {
        if n > 0 {
            lead *= half / n as f64;
        }
        out.push(lead * series_tail(q, n));
    }
    out
}

/// `Σ_m q^m n! / (m! (m+n)!)`, the series of `I_n` divided by its leading term.
fn series_tail(q: f64, n: usize) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut m = 0usize;
    loop {
        m += 1;
        term *= q / (m as f64 * (m + n) as f64);
        sum += term;
        if term <= 1e-17 * sum {
            return sum;
        }
    }
}

pub fn bessel_i0(x: f64) -> f64 {
    series_tail(0.25 * x * x, 0)
}

pub fn bessel_i1(x: f64) -> f64 {
    0.5 * x * series_tail(0.25 * x * x, 1)
}

/// `I₀(x) − 1`, accurate for small `x`.
pub fn bessel_i0_minus_one(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 0.0;
    let mut m = 0usize;
    loop {
        m += 1;
        term *= q / (m * m) as f64;
        sum += term;
        if term <= 1e-17 * sum || term == 0.0 {
            return sum;
        }
    }
}

/// `k`-th derivative of `I_n` at the point where `seq` holds `I_0, I_1, …`:
/// `I_n⁽ᵏ⁾ = 2⁻ᵏ Σ_j C(k,j) I_{|n−k+2j|}`.
pub fn bessel_i_derivative(seq: &[f64], n: usize, k: usize) -> f64 {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 0..=k {
        let idx = (n as i64 - k as i64 + 2 * j as i64).unsigned_abs() as usize;
        sum += binom * seq[idx];
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    sum / f64::powi(2.0, k as i32)
}

/// Nonnegative root of `I₀(α) − 1 = excess`.
///
/// Bisection brackets the root, Newton polishes it until the residual of
/// `I₀(α) − 1 − excess` is at most `1e-12` in absolute value (or the step
/// stalls at rounding level).
pub fn inverse_i0_excess(excess: f64) -> Result<f64> {
    if excess < -1e-12 {
        return Err(Error::TargetBelowOne { target: 1.0 + excess });
    }
    if excess <= 0.0 {
        return Ok(0.0);
    }
    let residual = |a: f64| bessel_i0_minus_one(a) - excess;
    let mut lo = 0.0;
    let mut hi = 1.0;
    while residual(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 {
            return Err(Error::SolverDiverged {
                solver: "I0 inversion",
                detail: format!("target excess {excess} out of range"),
            });
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-6 * hi {
            break;
        }
    }
    let mut alpha = 0.5 * (lo + hi);
    for _ in 0..50 {
        let res = residual(alpha);
        if res.abs() <= 1e-12 {
            break;
        }
        let step = res / bessel_i1(alpha);
        alpha = (alpha - step).clamp(lo, hi);
        if step.abs() <= 4.0 * f64::EPSILON * alpha {
            break;
        }
    }
    Ok(alpha)
}

/// Nonnegative root of `I₀(α) = target`.
pub fn inverse_i0(target: f64) -> Result<f64> {
    if target < 1.0 - 1e-12 {
        return Err(Error::TargetBelowOne { target });
    }
    inverse_i0_excess(target - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::adaptive_simpson;
    use std::f64::consts::PI;

    fn i_n_quadrature(n: usize, x: f64) -> f64 {
        // I_n(x) = ∫₀¹ exp(x cos 2πs) cos(2πns) ds, split so the first samples cannot alias
        let f = |s: f64| (x * (2.0 * PI * s).cos()).exp() * (2.0 * PI * n as f64 * s).cos();
        (0..7).map(|k| adaptive_simpson(f, k as f64 / 7.0, (k + 1) as f64 / 7.0, 1e-15)).sum()
    }

    #[test]
    fn series_matches_integral_representation() {
        for &x in &[0.0, 0.3, 1.0, 2.5, 6.0] {
            let seq = bessel_i_seq(x, 6);
            for (n, &v) in seq.iter().enumerate() {
                let q = i_n_quadrature(n, x);
                assert!((v - q).abs() <= 1e-12 * (1.0 + q.abs()), "I_{n}({x}): {v} vs {q}");
            }
        }
    }

    #[test]
    fn tabulated_values() {
        // reference values to 15 digits
        assert!((bessel_i0(1.0) - 1.266_065_877_752_008).abs() < 1e-15);
        assert!((bessel_i1(1.0) - 0.565_159_103_992_485).abs() < 1e-15);
        assert!((bessel_i0(5.0) - 27.239_871_823_604_44).abs() < 1e-12);
    }

    #[test]
    fn derivative_identity() {
        let x = 1.7;
        let seq = bessel_i_seq(x, 12);
        let h = 1e-4;
        for n in 0..5 {
            let plus = bessel_i_seq(x + h, 12)[n];
            let minus = bessel_i_seq(x - h, 12)[n];
            let fd = (plus - minus) / (2.0 * h);
            assert!((bessel_i_derivative(&seq, n, 1) - fd).abs() < 1e-7);
            let fd2 = (plus - 2.0 * seq[n] + minus) / (h * h);
            assert!((bessel_i_derivative(&seq, n, 2) - fd2).abs() < 1e-5);
        }
    }

    #[test]
    fn inverse_round_trip() {
        for &t in &[1.0, 1.0 + 1e-9, 1.5, 2.0, 5.0, 20.0, 300.0] {
            let a = inverse_i0(t).unwrap();
            assert!((bessel_i0(a) - t).abs() <= 1e-12 * t.max(1.0), "{t}");
        }
        assert_eq!(inverse_i0(1.0).unwrap(), 0.0);
        assert!(matches!(inverse_i0(0.9), Err(Error::TargetBelowOne { .. })));
    }
}
