//! Periodic fields on the unit-square torus, pullback metrics, and the
//! comparison measures between metrics (C⁰ distance, dilatation).

mod fields;
mod immersion;
mod spectral;
mod sym2;

pub use fields::{c0_distance, dilatation_id, teich_distance_bound, MetricField, ScalarField};
pub use immersion::{pullback, DerivativeMode, Immersion};
pub use spectral::taylor_jets;
pub use sym2::Sym2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n × n` samples of the torus `[0,1)²`, node `(i, j)` at `(i/n, j/n)`.
///
/// Nodes are stored row-major: index `j·n + i`, so `x` varies fastest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    n: usize,
}

impl PeriodicGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 {
            return Err(Error::GridTooSmall { n });
        }
        Ok(PeriodicGrid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        1.0 / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        (j % self.n) * self.n + (i % self.n)
    }

    /// Index of `(i + di, j + dj)` with wrap-around.
    pub fn offset(&self, i: usize, j: usize, di: isize, dj: isize) -> usize {
        let n = self.n as isize;
        let ii = (i as isize + di).rem_euclid(n) as usize;
        let jj = (j as isize + dj).rem_euclid(n) as usize;
        jj * self.n + ii
    }

    /// `(i, j)` of a node index.
    pub fn coords(&self, node: usize) -> (usize, usize) {
        (node % self.n, node / self.n)
    }

    pub fn point(&self, node: usize) -> (f64, f64) {
        let (i, j) = self.coords(node);
        (i as f64 * self.spacing(), j as f64 * self.spacing())
    }

    pub(crate) fn check_same(&self, other: &PeriodicGrid) -> Result<()> {
        if self.n != other.n {
            return Err(Error::GridMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_wraps() {
        let g = PeriodicGrid::new(8).unwrap();
        assert_eq!(g.index(9, 0), g.index(1, 0));
        assert_eq!(g.offset(0, 0, -1, -1), g.index(7, 7));
        assert_eq!(g.coords(g.index(3, 5)), (3, 5));
        assert!(PeriodicGrid::new(4).is_err());
    }
}
