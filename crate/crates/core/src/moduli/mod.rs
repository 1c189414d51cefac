//! Genus-one moduli: target conformal metrics, the modulus of a metric
//! on the torus, and the fixed-point search for a conformal corrugation.

mod modulus;
mod search;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric_grid::{Immersion, MetricField, ScalarField, Sym2};

pub use modulus::{torus_modulus, torus_modulus_detailed, ModulusSolution};
pub use search::{
    ball_boundary, choose_delta, choose_delta_with, conformal_search, project_to_ball, DeltaChoice, SearchConfig,
    SearchOutcome, SearchTrace, TraceRow,
};

/// A point of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UHPoint {
    re: f64,
    im: f64,
}

impl UHPoint {
    pub const I: UHPoint = UHPoint { re: 0.0, im: 1.0 };

    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0) || !re.is_finite() || !im.is_finite() {
            return Err(Error::DegenerateInput(format!("{re}{im:+}i is not in the upper half plane")));
        }
        Ok(UHPoint { re, im })
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        UHPoint::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    /// Parses `a+bi`, `a-bi`, `bi`, `i` or a bare real part (rejected: not in ℍ²).
    pub fn parse(s: &str) -> Result<Self> {
        let bad = || Error::DegenerateInput(format!("cannot parse {s:?} as a complex number"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let body = t.strip_suffix('i').ok_or_else(bad)?;
        // split at the last sign that is not part of an exponent
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse::<f64>().map_err(|_| bad())?,
        };
        let re = re.parse::<f64>().map_err(|_| bad())?;
        UHPoint::new(re, im)
    }
}

impl fmt::Display for UHPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.re == 0.0 {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

/// Beltrami coefficient `(i − w)/(i + w)` of the affine map taking the
/// square lattice to `⟨1, w⟩`.
pub fn mu_of_w(w: UHPoint) -> Complex64 {
    let w = w.to_complex();
    (Complex64::i() - w) / (Complex64::i() + w)
}

/// `|dz + μ dz̄|²` in real coordinates.
pub fn beltrami_form(mu: Complex64) -> Sym2 {
    Sym2::new((1.0 + mu).norm_sqr(), 2.0 * mu.im, (1.0 - mu).norm_sqr())
}

/// `δ λ² |dz + μ_w dz̄|²` node-wise.
pub fn build_target_metric(lambda2: &ScalarField, w: UHPoint, delta: f64) -> MetricField {
    let form = beltrami_form(mu_of_w(w));
    MetricField::new(lambda2.grid(), lambda2.values().iter().map(|&l| form * (delta * l)).collect())
}

/// Conformal factor `λ² = sqrt(det f*h)` of the induced metric.
pub fn conformal_factor(f: &Immersion) -> ScalarField {
    let g = crate::metric_grid::pullback(f);
    ScalarField::new(g.grid(), g.values().iter().map(|s| s.det().max(0.0).sqrt()).collect())
}

/// Hyperbolic distance in ℍ² (curvature −1).
pub fn hyp_distance(w1: UHPoint, w2: UHPoint) -> f64 {
    let chord = (w1.to_complex() - w2.to_complex()).norm();
    2.0 * (chord / (2.0 * (w1.im * w2.im).sqrt())).asinh()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_grid::PeriodicGrid;

    fn w(re: f64, im: f64) -> UHPoint {
        UHPoint::new(re, im).unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_of_w(UHPoint::I), Complex64::new(0.0, 0.0));
        let mu = mu_of_w(w(0.0, 2.0));
        assert!((mu - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn target_metric_examples() {
        let one = ScalarField::constant(PeriodicGrid::new(8).unwrap(), 1.0);
        assert_eq!(build_target_metric(&one, UHPoint::I, 1.0).at(0), Sym2::IDENTITY);
        let s = build_target_metric(&one, w(0.0, 2.0), 1.0).at(5);
        assert!((s.e - 4.0 / 9.0).abs() < 1e-15 && s.f.abs() < 1e-15 && (s.g - 16.0 / 9.0).abs() < 1e-15);
        let quarter = build_target_metric(&one, w(0.0, 2.0), 0.25).at(5);
        assert!((quarter.g - 4.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn distance_examples() {
        assert_eq!(hyp_distance(w(0.3, 1.2), w(0.3, 1.2)), 0.0);
        assert!((hyp_distance(UHPoint::I, w(0.0, 2.0)) - 2f64.ln()).abs() < 1e-15);
        // arcosh form
        let (a, b) = (w(0.2, 0.7), w(-1.1, 2.5));
        let d = (1.0 + (a.to_complex() - b.to_complex()).norm_sqr() / (2.0 * a.im() * b.im())).acosh();
        assert!((hyp_distance(a, b) - d).abs() < 1e-14);
    }

    #[test]
    fn parsing() {
        assert_eq!(UHPoint::parse("0.3+1.2i").unwrap(), w(0.3, 1.2));
        assert_eq!(UHPoint::parse("2i").unwrap(), w(0.0, 2.0));
        assert_eq!(UHPoint::parse("i").unwrap(), UHPoint::I);
        assert_eq!(UHPoint::parse("-0.05 + 1e-1i").unwrap(), w(-0.05, 0.1));
        assert_eq!(UHPoint::parse("1e-2+1e+0i").unwrap(), w(0.01, 1.0));
        assert!(UHPoint::parse("0.3-1.2i").is_err());
        assert!(UHPoint::parse("1.5").is_err());
        assert!(UHPoint::parse("abc").is_err());
        assert_eq!(UHPoint::parse(&w(0.3, 1.2).to_string()).unwrap(), w(0.3, 1.2));
    }
}
