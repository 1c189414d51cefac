//! Antiderivatives of the zero-mean loop `γ − γ̄` over one period.
//!
//! With `θ = α cos 2πs`,
//! `∫₀ᵗ (cosh θ − I₀(α)) ds = Σ_{n even ≥ 2} I_n(α) sin(2πnt) / (πn)` and
//! `∫₀ᵗ sinh θ ds = Σ_{n odd} I_n(α) sin(2πnt) / (πn)`.
//! Both series converge faster than geometrically, and differentiating
//! them term by term gives every derivative in `α` and `t`.

use std::f64::consts::PI;

use crate::bessel::{bessel_i0, bessel_i_derivative, bessel_i_seq};
use crate::jet::Jet;
use crate::quadrature::adaptive_simpson;

/// Number of series terms needed for `k` derivatives at amplitude `alpha`.
fn series_length(alpha: f64, k: usize) -> usize {
    let mut cap = 24;
    loop {
        let seq = bessel_i_seq(alpha, cap);
        let floor = 1e-17 * seq[1];
        if let Some(n) = (2..=cap).find(|&n| seq[n] * (n as f64).powi(k as i32 + 1) <= floor) {
            return n;
        }
        cap *= 2;
        assert!(cap <= 4096, "loop series does not converge for alpha = {alpha}");
    }
}

/// `(C, S)` with `C = ∫₀ᵗ (cosh θ − I₀) ds`, `S = ∫₀ᵗ sinh θ ds`.
pub fn loop_integrals(alpha: f64, t: f64) -> (f64, f64) {
    if alpha == 0.0 {
        return (0.0, 0.0);
    }
    let len = series_length(alpha, 0);
    let seq = bessel_i_seq(alpha, len);
    let (mut c, mut s) = (0.0, 0.0);
    for (n, &i_n) in seq.iter().enumerate().skip(1) {
        let term = i_n * (2.0 * PI * n as f64 * t).sin() / (PI * n as f64);
        if n % 2 == 0 {
            c += term;
        } else {
            s += term;
        }
    }
    (c, s)
}

/// Same integrals by adaptive Simpson on `[0, t]` (independent check).
pub fn loop_integrals_quadrature(alpha: f64, t: f64, tol: f64) -> (f64, f64) {
    let i0 = bessel_i0(alpha);
    let theta = |s: f64| alpha * (2.0 * PI * s).cos();
    // split at quarter periods so the integrand is monotone on each piece
    let mut knots = vec![0.0];
    let mut q = 0.25;
    while q < t {
        knots.push(q);
        q += 0.25;
    }
    knots.push(t);
    let pieces = knots.len() - 1;
    let (mut c, mut s) = (0.0, 0.0);
    for w in knots.windows(2) {
        c += adaptive_simpson(|x| theta(x).cosh() - i0, w[0], w[1], tol / pieces as f64);
        s += adaptive_simpson(|x| theta(x).sinh(), w[0], w[1], tol / pieces as f64);
    }
    (c, s)
}

/// Jet version: `alpha` and `t` carry derivatives in the torus coordinates.
pub fn loop_integrals_jet(alpha: &Jet, t: &Jet) -> (Jet, Jet) {
    let order = alpha.order().min(t.order());
    let a0 = alpha.value();
    if a0 == 0.0 {
        return (Jet::constant(0.0, order), Jet::constant(0.0, order));
    }
    let len = series_length(a0, order);
    let seq = bessel_i_seq(a0, len + order);
    let alpha_powers = alpha.truncate(order).increment_powers();
    let tau_powers = t.truncate(order).increment_powers();
    let t0 = t.value();

    let mut fact = vec![1.0; order + 1];
    for k in 1..=order {
        fact[k] = fact[k - 1] * k as f64;
    }

    let mut c = Jet::constant(0.0, order);
    let mut s = Jet::constant(0.0, order);
    let mut amp_w = vec![0.0; order + 1];
    let mut phase_w = vec![0.0; order + 1];
    for n in 1..=len {
        let omega = 2.0 * PI * n as f64;
        let (sn, cs) = (omega * t0).sin_cos();
        let cycle = [sn, cs, -sn, -cs];
        let mut scale = 1.0;
        for k in 0..=order {
            amp_w[k] = bessel_i_derivative(&seq, n, k) / fact[k];
            phase_w[k] = cycle[k % 4] * scale / fact[k];
            scale *= omega;
        }
        let term = Jet::combine(&alpha_powers, &amp_w) * Jet::combine(&tau_powers, &phase_w) * (1.0 / (PI * n as f64));
        if n % 2 == 0 {
            c += term;
        } else {
            s += term;
        }
    }
    (c, s)
}
