use std::fmt::Write as _;
use std::path::Path;

use super::{PeriodicGrid, Sym2};
use crate::error::{Error, Result};

/// One [`Sym2`] per grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricField {
    grid: PeriodicGrid,
    values: Vec<Sym2>,
}

impl MetricField {
    pub fn new(grid: PeriodicGrid, values: Vec<Sym2>) -> Self {
        assert_eq!(values.len(), grid.len(), "metric field size does not match grid");
        debug_assert!(values.iter().all(Sym2::is_finite));
        MetricField { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, value: Sym2) -> Self {
        MetricField::new(grid, vec![value; grid.len()])
    }

    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> Sym2) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .collect();
        MetricField::new(grid, values)
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[Sym2] {
        &self.values
    }

    pub fn at(&self, node: usize) -> Sym2 {
        self.values[node]
    }

    pub fn map(&self, f: impl Fn(Sym2) -> Sym2) -> MetricField {
        MetricField::new(self.grid, self.values.iter().map(|&s| f(s)).collect())
    }

    pub fn zip_with(&self, other: &MetricField, f: impl Fn(Sym2, Sym2) -> Sym2) -> Result<MetricField> {
        self.grid.check_same(&other.grid)?;
        Ok(MetricField::new(
            self.grid,
            self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        ))
    }

    pub fn sub(&self, other: &MetricField) -> Result<MetricField> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn add(&self, other: &MetricField) -> Result<MetricField> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn scale(&self, s: f64) -> MetricField {
        self.map(|m| m * s)
    }

    /// First node that is not positive definite.
    pub fn first_non_positive(&self) -> Option<usize> {
        self.values.iter().position(|s| !s.is_positive_definite())
    }

    pub fn is_positive_definite(&self) -> bool {
        self.first_non_positive().is_none()
    }

    pub fn require_positive_definite(&self) -> Result<()> {
        match self.first_non_positive() {
            Some(node) => Err(Error::NotPositiveDefinite { node }),
            None => Ok(()),
        }
    }

    /// Minimum over nodes of the smallest generalized eigenvalue against `base`.
    pub fn min_pencil_eigenvalue(&self, base: &MetricField) -> Result<f64> {
        self.grid.check_same(&base.grid)?;
        base.require_positive_definite()?;
        Ok(self
            .values
            .iter()
            .zip(&base.values)
            .map(|(a, b)| a.pencil_eigenvalues(b).0)
            .fold(f64::INFINITY, f64::min))
    }

    /// CSV with header `x,y,E,F,G`, one row per node in storage order.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,E,F,G\n");
        for (k, s) in self.values.iter().enumerate() {
            let (x, y) = self.grid.point(k);
            writeln!(out, "{x},{y},{},{},{}", s.e, s.f, s.g).unwrap();
        }
        out
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv()).map_err(|e| Error::io(path, e))
    }
}

/// One real value per grid node.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.len(), "scalar field size does not match grid");
        debug_assert!(values.iter().all(|v| v.is_finite()));
        ScalarField { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, value: f64) -> Self {
        ScalarField::new(grid, vec![value; grid.len()])
    }

    pub fn from_fn(grid: PeriodicGrid, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let values = (0..grid.len())
            .map(|k| {
                let (x, y) = grid.point(k);
                f(x, y)
            })
            .collect();
        ScalarField::new(grid, values)
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn at(&self, node: usize) -> f64 {
        self.values[node]
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_identically_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// CSV with header `x,y,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,value\n");
        for (k, v) in self.values.iter().enumerate() {
            let (x, y) = self.grid.point(k);
            writeln!(out, "{x},{y},{v}").unwrap();
        }
        out
    }
}

/// Max over nodes of the spectral norm of `a − b`.
pub fn c0_distance(a: &MetricField, b: &MetricField) -> Result<f64> {
    a.grid.check_same(&b.grid)?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(&p, &q)| (p - q).spectral_norm())
        .fold(0.0, f64::max))
}

/// Sup over nodes of `sqrt(λ_max / λ_min)` for the pencil `(g2, g1)`.
pub fn dilatation_id(g1: &MetricField, g2: &MetricField) -> Result<f64> {
    g1.grid.check_same(&g2.grid)?;
    g1.require_positive_definite()?;
    g2.require_positive_definite()?;
    Ok(g1
        .values
        .iter()
        .zip(&g2.values)
        .map(|(a, b)| {
            let (lo, hi) = b.pencil_eigenvalues(a);
            (hi / lo).sqrt().max(1.0)
        })
        .fold(1.0, f64::max))
}

/// `½ log dilatation_id(g1, g2)`.
pub fn teich_distance_bound(g1: &MetricField, g2: &MetricField) -> Result<f64> {
    Ok(0.5 * dilatation_id(g1, g2)?.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> PeriodicGrid {
        PeriodicGrid::new(8).unwrap()
    }

    #[test]
    fn c0_examples() {
        let id = MetricField::constant(grid(), Sym2::IDENTITY);
        assert_eq!(c0_distance(&id, &id).unwrap(), 0.0);
        let a = MetricField::constant(grid(), Sym2::new(2.0, 0.0, 1.0));
        assert_eq!(c0_distance(&a, &id).unwrap(), 1.0);
        let b = MetricField::constant(grid(), Sym2::new(1.0, 0.5, 1.0));
        assert_eq!(c0_distance(&b, &id).unwrap(), 0.5);
        let other = MetricField::constant(PeriodicGrid::new(9).unwrap(), Sym2::IDENTITY);
        assert!(matches!(c0_distance(&id, &other), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn dilatation_examples() {
        let g1 = MetricField::constant(grid(), Sym2::IDENTITY);
        let g2 = MetricField::constant(grid(), Sym2::new(1.0, 0.0, 4.0));
        assert!((dilatation_id(&g1, &g2).unwrap() - 2.0).abs() < 1e-15);
        assert!((teich_distance_bound(&g1, &g2).unwrap() - 0.5 * 2f64.ln()).abs() < 1e-15);
        assert_eq!(teich_distance_bound(&g1, &g1).unwrap(), 0.0);
        let bad = MetricField::constant(grid(), Sym2::new(1.0, 2.0, 1.0));
        assert!(matches!(dilatation_id(&g1, &bad), Err(Error::NotPositiveDefinite { .. })));
    }

    #[test]
    fn csv_layout() {
        let m = MetricField::from_fn(grid(), |x, y| Sym2::new(1.0 + x, y, 2.0));
        let csv = m.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,y,E,F,G"));
        assert_eq!(lines.next(), Some("0,0,1,0,2"));
        assert_eq!(lines.next(), Some("0.125,0,1.125,0,2"));
        assert_eq!(csv.lines().count(), 65);
    }
}
