//! Splitting a metric defect into squares of integral linear forms.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric_grid::{MetricField, ScalarField, Sym2};

/// The constant form `a dx + b dy` with `gcd(|a|, |b|) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LinearFormZ {
    a: i64,
    b: i64,
}

impl LinearFormZ {
    pub const DX: LinearFormZ = LinearFormZ { a: 1, b: 0 };
    pub const DY: LinearFormZ = LinearFormZ { a: 0, b: 1 };
    pub const DIAGONAL: LinearFormZ = LinearFormZ { a: 1, b: 1 };
    pub const ANTIDIAGONAL: LinearFormZ = LinearFormZ { a: 1, b: -1 };

    pub fn new(a: i64, b: i64) -> Result<Self> {
        if gcd(a.unsigned_abs(), b.unsigned_abs()) != 1 {
            return Err(Error::NonPrimitiveForm { a, b });
        }
        Ok(LinearFormZ { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    /// Primitive integer vector spanning the kernel.
    pub fn kernel(&self) -> (i64, i64) {
        (-self.b, self.a)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.a as f64 * x + self.b as f64 * y
    }

    /// `ℓ ⊗ ℓ`.
    pub fn square(&self) -> Sym2 {
        Sym2::square_of_form(self.a as f64, self.b as f64)
    }
}

impl fmt::Display for LinearFormZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(1,0), (0,1), (1,1), (1,−1)`, the order in which stages are applied.
pub fn default_dictionary() -> Vec<LinearFormZ> {
    vec![LinearFormZ::DX, LinearFormZ::DY, LinearFormZ::DIAGONAL, LinearFormZ::ANTIDIAGONAL]
}

/// `Δ = Σ η_j ℓ_j ⊗ ℓ_j` with `η_j ≥ 0`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub terms: Vec<(LinearFormZ, ScalarField)>,
}

impl Decomposition {
    pub fn empty() -> Self {
        Decomposition { terms: Vec::new() }
    }

    /// `Σ η_j ℓ_j ⊗ ℓ_j`, or `None` for an empty decomposition.
    pub fn reconstruct(&self) -> Option<MetricField> {
        let (_, first) = self.terms.first()?;
        let grid = first.grid();
        let values = (0..grid.len())
            .map(|k| {
                self.terms
                    .iter()
                    .fold(Sym2::default(), |acc, (form, eta)| acc + form.square() * eta.at(k))
            })
            .collect();
        Some(MetricField::new(grid, values))
    }

    /// Terms whose coefficient is not identically zero.
    pub fn active_terms(&self) -> impl Iterator<Item = &(LinearFormZ, ScalarField)> {
        self.terms.iter().filter(|(_, eta)| !eta.is_identically_zero())
    }

    pub fn min_coefficient(&self) -> f64 {
        self.terms.iter().map(|(_, eta)| eta.min()).fold(f64::INFINITY, f64::min)
    }
}

/// Closed-form split over the dictionary; forms outside the default four get `η ≡ 0`.
pub fn decompose(delta: &MetricField, dictionary: &[LinearFormZ]) -> Result<Decomposition> {
    for required in default_dictionary() {
        if !dictionary.contains(&required) {
            return Err(Error::DegenerateInput(format!("dictionary lacks the form {required}")));
        }
    }
    let grid = delta.grid();
    for (node, s) in delta.values().iter().enumerate() {
        let margin = (s.e - s.f.abs()).min(s.g - s.f.abs());
        if margin < -1e-12 {
            return Err(Error::DefectOutsideCone { node, margin });
        }
    }
    let coefficient = |form: &LinearFormZ, s: &Sym2| -> f64 {
        let v = match (form.a, form.b) {
            (1, 0) | (-1, 0) => s.e - s.f.abs(),
            (0, 1) | (0, -1) => s.g - s.f.abs(),
            (1, 1) | (-1, -1) => s.f.max(0.0),
            (1, -1) | (-1, 1) => (-s.f).max(0.0),
            _ => 0.0,
        };
        v.max(0.0)
    };
    let terms = dictionary
        .iter()
        .map(|form| {
            let values = delta.values().iter().map(|s| coefficient(form, s)).collect();
            (*form, ScalarField::new(grid, values))
        })
        .collect();
    Ok(Decomposition { terms })
}

/// `min over nodes of min(E − |F|, G − |F|)`.
pub fn cone_margin(delta: &MetricField) -> f64 {
    delta
        .values()
        .iter()
        .map(|s| (s.e - s.f.abs()).min(s.g - s.f.abs()))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_grid::{c0_distance, PeriodicGrid};

    fn constant(s: Sym2) -> MetricField {
        MetricField::constant(PeriodicGrid::new(8).unwrap(), s)
    }

    fn coefficients(d: &Decomposition) -> Vec<f64> {
        d.terms.iter().map(|(_, eta)| eta.at(3)).collect()
    }

    #[test]
    fn decomposition_examples() {
        let dict = default_dictionary();
        let d = decompose(&constant(Sym2::new(2.0, 0.0, 1.0)), &dict).unwrap();
        assert_eq!(coefficients(&d), vec![2.0, 1.0, 0.0, 0.0]);
        let d = decompose(&constant(Sym2::new(2.0, 1.0, 2.0)), &dict).unwrap();
        assert_eq!(coefficients(&d), vec![1.0, 1.0, 1.0, 0.0]);
        let d = decompose(&constant(Sym2::new(2.0, -0.5, 1.0)), &dict).unwrap();
        assert_eq!(coefficients(&d), vec![1.5, 0.5, 0.0, 0.5]);
        assert!(matches!(
            decompose(&constant(Sym2::new(1.0, 2.0, 1.0)), &dict),
            Err(Error::DefectOutsideCone { .. })
        ));
    }

    #[test]
    fn reconstruction_is_exact() {
        let grid = PeriodicGrid::new(16).unwrap();
        let delta = MetricField::from_fn(grid, |x, y| {
            let f = 0.3 * (6.0 * x + 2.0 * y).sin();
            Sym2::new(1.0 + x, f, 0.5 + y)
        });
        let d = decompose(&delta, &default_dictionary()).unwrap();
        assert!(c0_distance(&d.reconstruct().unwrap(), &delta).unwrap() <= 1e-15);
        assert!(d.min_coefficient() >= 0.0);
    }

    #[test]
    fn margin_examples() {
        assert_eq!(cone_margin(&constant(Sym2::new(2.0, 0.0, 1.0))), 1.0);
        assert_eq!(cone_margin(&constant(Sym2::new(1.0, 1.0, 1.0))), 0.0);
        assert_eq!(cone_margin(&constant(Sym2::new(3.0, -1.0, 2.0))), 1.0);
    }

    #[test]
    fn forms_must_be_primitive() {
        assert!(LinearFormZ::new(2, 4).is_err());
        assert!(LinearFormZ::new(0, 0).is_err());
        let f = LinearFormZ::new(2, -3).unwrap();
        let (kx, ky) = f.kernel();
        assert_eq!(f.a() * kx + f.b() * ky, 0);
    }
}
