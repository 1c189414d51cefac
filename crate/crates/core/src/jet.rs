//! Truncated bivariate Taylor polynomials.
//!
//! A [`Jet`] of order `k` at a point `(x0, y0)` stores the Taylor
//! coefficients `c[i,j] = ∂ˣⁱ∂ʸʲ f(x0, y0) / (i! j!)` for `i + j ≤ k`.
//! Arithmetic truncates at the smaller order of its operands, so every
//! operation is exact on the retained coefficients.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

/// Highest supported order.
pub const MAX_ORDER: usize = 6;
/// Coefficients of a jet of order [`MAX_ORDER`].
pub const MAX_COEFFS: usize = n_coeffs(MAX_ORDER);

/// Number of coefficients of an order-`k` jet.
pub const fn n_coeffs(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

/// Storage slot of `c[i,j]`: graded by total degree, then by `j`.
pub const fn slot(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, m| acc * m as f64)
}

struct ProductTable {
    triples: Vec<(u8, u8, u8)>,
    prefix: [usize; MAX_ORDER + 2],
}

fn product_table() -> &'static ProductTable {
    static TABLE: OnceLock<ProductTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut triples = Vec::new();
        let mut prefix = [0; MAX_ORDER + 2];
        for d in 0..=MAX_ORDER {
            for j in 0..=d {
                let i = d - j;
                for k in 0..=i {
                    for l in 0..=j {
                        triples.push((slot(i, j) as u8, slot(k, l) as u8, slot(i - k, j - l) as u8));
                    }
                }
            }
            prefix[d + 1] = triples.len();
        }
        ProductTable { triples, prefix }
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    c: [f64; MAX_COEFFS],
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Self {
        assert!(order <= MAX_ORDER, "jet order {order} exceeds {MAX_ORDER}");
        let mut c = [0.0; MAX_COEFFS];
        c[0] = value;
        Jet { order, c }
    }

    /// The coordinate function `x` expanded at `x0`.
    pub fn var_x(x0: f64, order: usize) -> Self {
        let mut jet = Jet::constant(x0, order);
        if order >= 1 {
            jet.c[slot(1, 0)] = 1.0;
        }
        jet
    }

    /// The coordinate function `y` expanded at `y0`.
    pub fn var_y(y0: f64, order: usize) -> Self {
        let mut jet = Jet::constant(y0, order);
        if order >= 1 {
            jet.c[slot(0, 1)] = 1.0;
        }
        jet
    }

    /// Affine function `value + gx·δx + gy·δy`.
    pub fn affine(value: f64, gx: f64, gy: f64, order: usize) -> Self {
        let mut jet = Jet::constant(value, order);
        if order >= 1 {
            jet.c[slot(1, 0)] = gx;
            jet.c[slot(0, 1)] = gy;
        }
        jet
    }

    /// Builds a jet from partial derivatives `d(i, j) = ∂ˣⁱ∂ʸʲ f`.
    pub fn from_partials(order: usize, mut d: impl FnMut(usize, usize) -> f64) -> Self {
        let mut jet = Jet::constant(0.0, order);
        for deg in 0..=order {
            for j in 0..=deg {
                let i = deg - j;
                jet.c[slot(i, j)] = d(i, j) / (factorial(i) * factorial(j));
            }
        }
        jet
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Taylor coefficient `c[i,j]`; zero beyond the order.
    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        if i + j > self.order {
            0.0
        } else {
            self.c[slot(i, j)]
        }
    }

    /// Partial derivative `∂ˣⁱ∂ʸʲ` at the expansion point.
    pub fn partial(&self, i: usize, j: usize) -> f64 {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.c[..n_coeffs(self.order)]
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut c = [0.0; MAX_COEFFS];
        let m = n_coeffs(order);
        c[..m].copy_from_slice(&self.c[..m]);
        Jet { order, c }
    }

    fn shifted_derivative(&self, di: usize, dj: usize) -> Self {
        assert!(self.order >= 1, "cannot differentiate an order-0 jet");
        let order = self.order - 1;
        let mut out = Jet::constant(0.0, order);
        for deg in 0..=order {
            for j in 0..=deg {
                let i = deg - j;
                let scale = if di == 1 { (i + 1) as f64 } else { (j + 1) as f64 };
                out.c[slot(i, j)] = scale * self.c[slot(i + di, j + dj)];
            }
        }
        out
    }

    /// `∂/∂x`, one order lower.
    pub fn dx(&self) -> Self {
        self.shifted_derivative(1, 0)
    }

    /// `∂/∂y`, one order lower.
    pub fn dy(&self) -> Self {
        self.shifted_derivative(0, 1)
    }

    /// `self - value`: the nilpotent part.
    pub fn increment(&self) -> Self {
        let mut out = *self;
        out.c[0] = 0.0;
        out
    }

    /// Powers `δ⁰ … δᵏ` of the increment, `k = order`.
    pub fn increment_powers(&self) -> Vec<Jet> {
        let delta = self.increment();
        let mut powers = Vec::with_capacity(self.order + 1);
        powers.push(Jet::constant(1.0, self.order));
        for k in 1..=self.order {
            let next = powers[k - 1] * delta;
            powers.push(next);
        }
        powers
    }

    /// `Σ_k weights[k] · powers[k]`.
    pub fn combine(powers: &[Jet], weights: &[f64]) -> Self {
        let order = powers[0].order;
        let m = n_coeffs(order);
        let mut out = Jet::constant(0.0, order);
        for (p, &w) in powers.iter().zip(weights) {
            if w != 0.0 {
                for s in 0..m {
                    out.c[s] += w * p.c[s];
                }
            }
        }
        out
    }

    /// Composition `g ∘ self` from `derivs[k] = g⁽ᵏ⁾(self.value())`.
    ///
    /// Missing high derivatives are treated as zero.
    pub fn compose(&self, derivs: &[f64]) -> Self {
        let k_max = self.order.min(derivs.len().saturating_sub(1));
        let delta = self.increment();
        let mut out = Jet::constant(derivs[k_max] / factorial(k_max), self.order);
        for k in (0..k_max).rev() {
            out = out * delta;
            out.c[0] += derivs[k] / factorial(k);
        }
        out
    }

    pub fn sqrt(&self) -> Self {
        let x = self.value();
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut d = x.sqrt();
        let mut expo = 0.5;
        for _ in 0..=self.order {
            derivs.push(d);
            d *= expo / x;
            expo -= 1.0;
        }
        self.compose(&derivs)
    }

    pub fn recip(&self) -> Self {
        let x = self.value();
        let mut derivs = Vec::with_capacity(self.order + 1);
        let mut d = 1.0 / x;
        for k in 0..=self.order {
            derivs.push(d);
            d *= -((k + 1) as f64) / x;
        }
        self.compose(&derivs)
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [s, c, -s, -c];
        let derivs: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        let cycle = [c, -s, -c, s];
        let derivs: Vec<f64> = (0..=self.order).map(|k| cycle[k % 4]).collect();
        self.compose(&derivs)
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose(&vec![e; self.order + 1])
    }

    pub fn cosh(&self) -> Self {
        let x = self.value();
        let derivs: Vec<f64> = (0..=self.order)
            .map(|k| if k % 2 == 0 { x.cosh() } else { x.sinh() })
            .collect();
        self.compose(&derivs)
    }

    pub fn sinh(&self) -> Self {
        let x = self.value();
        let derivs: Vec<f64> = (0..=self.order)
            .map(|k| if k % 2 == 0 { x.sinh() } else { x.cosh() })
            .collect();
        self.compose(&derivs)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.is_finite())
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut out = Jet::constant(0.0, order);
        for s in 0..n_coeffs(order) {
            out.c[s] = self.c[s] + rhs.c[s];
        }
        out
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for s in 0..n_coeffs(self.order) {
            self.c[s] = -self.c[s];
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let table = product_table();
        let mut out = Jet::constant(0.0, order);
        for &(o, a, b) in &table.triples[..table.prefix[order + 1]] {
            out.c[o as usize] += self.c[a as usize] * rhs.c[b as usize];
        }
        out
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for s in 0..n_coeffs(self.order) {
            self.c[s] *= rhs;
        }
        self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER: usize = 5;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn product_of_coordinates() {
        let x = Jet::var_x(0.3, 3);
        let y = Jet::var_y(-0.2, 3);
        let p = x * x * y;
        // x²y at (0.3,-0.2): ∂xx = 2y, ∂xy = 2x, ∂xxy = 2
        assert!(close(p.partial(0, 0), 0.09 * -0.2, 1e-15));
        assert!(close(p.partial(2, 0), -0.4, 1e-15));
        assert!(close(p.partial(1, 1), 0.6, 1e-15));
        assert!(close(p.partial(2, 1), 2.0, 1e-15));
        assert_eq!(p.partial(3, 0), 0.0);
    }

    #[test]
    fn elementary_functions_match_closed_forms() {
        let x0 = 0.7;
        let x = Jet::var_x(x0, ORDER);
        let s = x.sin();
        let e = x.exp();
        let r = x.recip();
        let q = x.sqrt();
        for k in 0..=ORDER {
            let sin_k = [x0.sin(), x0.cos(), -x0.sin(), -x0.cos()][k % 4];
            assert!(close(s.partial(k, 0), sin_k, 1e-13));
            assert!(close(e.partial(k, 0), x0.exp(), 1e-13));
            let recip_k = (-1f64).powi(k as i32) * factorial(k) * x0.powi(-(k as i32) - 1);
            assert!(close(r.partial(k, 0), recip_k, 1e-12));
        }
        assert!(close(q.partial(2, 0), -0.25 * x0.powf(-1.5), 1e-13));
    }

    #[test]
    fn chain_rule_in_two_variables() {
        // sin(x·y) at (0.4, 0.9): ∂xy = cos(xy) − xy sin(xy)
        let (x0, y0) = (0.4, 0.9);
        let j = (Jet::var_x(x0, 4) * Jet::var_y(y0, 4)).sin();
        let t = x0 * y0;
        assert!(close(j.partial(1, 1), t.cos() - t * t.sin(), 1e-14));
        let h = 1e-3;
        let f = |x: f64, y: f64| (x * y).sin();
        let fd = (f(x0 + h, y0 + h) - f(x0 + h, y0 - h) - f(x0 - h, y0 + h) + f(x0 - h, y0 - h))
            / (4.0 * h * h);
        assert!(close(j.partial(1, 1), fd, 1e-6));
    }

    #[test]
    fn derivative_shifts_coefficients() {
        let f = (Jet::var_x(0.2, 4) * 3.0 + Jet::var_y(0.5, 4)).cosh();
        let fx = f.dx();
        assert_eq!(fx.order(), 3);
        for i in 0..=3 {
            for j in 0..=(3 - i) {
                assert!(close(fx.partial(i, j), f.partial(i + 1, j), 1e-13));
            }
        }
    }

    #[test]
    fn reciprocal_inverts() {
        let f = Jet::var_x(1.3, ORDER).cosh() + Jet::var_y(0.1, ORDER).sin();
        let one = f * f.recip();
        assert!(close(one.value(), 1.0, 1e-15));
        for s in 1..n_coeffs(ORDER) {
            assert!(one.coeffs()[s].abs() < 1e-13);
        }
    }

    #[test]
    fn order_truncation_is_min_of_operands() {
        let a = Jet::var_x(1.0, 4);
        let b = Jet::var_y(2.0, 2);
        assert_eq!((a * b).order(), 2);
        assert_eq!((a + b).order(), 2);
    }
}
