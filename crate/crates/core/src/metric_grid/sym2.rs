use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Symmetric bilinear form `E dx² + 2F dx dy + G dy²`.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct Sym2 {
    pub e: f64,
    pub f: f64,
    pub g: f64,
}

impl Sym2 {
    pub const IDENTITY: Sym2 = Sym2 { e: 1.0, f: 0.0, g: 1.0 };

    pub const fn new(e: f64, f: f64, g: f64) -> Self {
        Sym2 { e, f, g }
    }

    /// `ℓ ⊗ ℓ` for the form `ℓ = a dx + b dy`.
    pub fn square_of_form(a: f64, b: f64) -> Self {
        Sym2::new(a * a, a * b, b * b)
    }

    pub fn det(&self) -> f64 {
        self.e * self.g - self.f * self.f
    }

    pub fn trace(&self) -> f64 {
        self.e + self.g
    }

    pub fn is_positive_definite(&self) -> bool {
        self.e > 0.0 && self.g > 0.0 && self.det() > 0.0
    }

    /// Evaluates the form on `(vx, vy)`.
    pub fn eval(&self, vx: f64, vy: f64) -> f64 {
        self.e * vx * vx + 2.0 * self.f * vx * vy + self.g * vy * vy
    }

    /// Eigenvalues `(λ_min, λ_max)` of `[[E,F],[F,G]]`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = 0.5 * (self.e + self.g);
        let rad = (0.5 * (self.e - self.g)).hypot(self.f);
        (mean - rad, mean + rad)
    }

    /// Largest absolute eigenvalue.
    pub fn spectral_norm(&self) -> f64 {
        let mean = 0.5 * (self.e + self.g);
        mean.abs() + (0.5 * (self.e - self.g)).hypot(self.f)
    }

    pub fn inverse(&self) -> Sym2 {
        let d = self.det();
        Sym2::new(self.g / d, -self.f / d, self.e / d)
    }

    /// Generalized eigenvalues `(λ_min, λ_max)` of the pencil `(self, base)`,
    /// i.e. the range of `self(v)/base(v)`. `base` must be positive definite.
    pub fn pencil_eigenvalues(&self, base: &Sym2) -> (f64, f64) {
        let d1 = base.det();
        let s = base.e * self.g + base.g * self.e - 2.0 * base.f * self.f;
        let disc = (s * s - 4.0 * d1 * self.det()).max(0.0);
        let big = (s + disc.sqrt()) / (2.0 * d1);
        let small = if big != 0.0 { self.det() / (d1 * big) } else { (s - disc.sqrt()) / (2.0 * d1) };
        (small.min(big), big.max(small))
    }

    pub fn is_finite(&self) -> bool {
        self.e.is_finite() && self.f.is_finite() && self.g.is_finite()
    }
}

impl Add for Sym2 {
    type Output = Sym2;
    fn add(self, o: Sym2) -> Sym2 {
        Sym2::new(self.e + o.e, self.f + o.f, self.g + o.g)
    }
}

impl Sub for Sym2 {
    type Output = Sym2;
    fn sub(self, o: Sym2) -> Sym2 {
        Sym2::new(self.e - o.e, self.f - o.f, self.g - o.g)
    }
}

impl Mul<f64> for Sym2 {
    type Output = Sym2;
    fn mul(self, s: f64) -> Sym2 {
        Sym2::new(self.e * s, self.f * s, self.g * s)
    }
}

impl Mul<Sym2> for f64 {
    type Output = Sym2;
    fn mul(self, m: Sym2) -> Sym2 {
        m * self
    }
}
