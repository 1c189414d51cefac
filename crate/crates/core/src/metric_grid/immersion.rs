use rayon::prelude::*;

use super::{MetricField, PeriodicGrid, Sym2};
use crate::jet::Jet;
use crate::minkowski::{lorentz_dot, MinkVector};

/// How tangent vectors are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivativeMode {
    /// First-order Taylor coefficients carried with the map.
    Analytic,
    /// Second-order centered differences of node values.
    CenteredDifference,
}

/// Map `p ↦ linear_part·p + periodic(p)` from the torus cover into ℝ^{2,1}.
///
/// The periodic part is stored as per-node jets of its three components,
/// so analytic derivatives up to the jet order are available. Lattice
/// translations act by adding rows of `linear_part`.
#[derive(Clone, Debug)]
pub struct Immersion {
    grid: PeriodicGrid,
    linear_part: [[f64; 3]; 2],
    periodic: Vec<[Jet; 3]>,
    mode: DerivativeMode,
}

impl Immersion {
    /// Samples a periodic part given as a function of coordinate jets.
    pub fn from_fn(
        grid: PeriodicGrid,
        linear_part: [[f64; 3]; 2],
        order: usize,
        f: impl Fn(Jet, Jet) -> [Jet; 3] + Sync,
    ) -> Self {
        let periodic = (0..grid.len())
            .into_par_iter()
            .map(|k| {
                let (x, y) = grid.point(k);
                f(Jet::var_x(x, order), Jet::var_y(y, order))
            })
            .collect();
        let mode = if order >= 1 { DerivativeMode::Analytic } else { DerivativeMode::CenteredDifference };
        Immersion { grid, linear_part, periodic, mode }
    }

    /// Node values only; derivatives by centered differences.
    pub fn from_samples(grid: PeriodicGrid, linear_part: [[f64; 3]; 2], periodic: Vec<MinkVector>) -> Self {
        assert_eq!(periodic.len(), grid.len());
        let periodic = periodic
            .into_iter()
            .map(|v| [Jet::constant(v.x, 0), Jet::constant(v.y, 0), Jet::constant(v.z, 0)])
            .collect();
        Immersion { grid, linear_part, periodic, mode: DerivativeMode::CenteredDifference }
    }

    pub(crate) fn from_jets(
        grid: PeriodicGrid,
        linear_part: [[f64; 3]; 2],
        periodic: Vec<[Jet; 3]>,
        mode: DerivativeMode,
    ) -> Self {
        assert_eq!(periodic.len(), grid.len());
        let order = periodic.first().map_or(0, |p| p[0].order());
        let mode = if order == 0 { DerivativeMode::CenteredDifference } else { mode };
        Immersion { grid, linear_part, periodic, mode }
    }

    /// The flat torus `(x, y) ↦ (x, y, 0)`.
    pub fn plane(grid: PeriodicGrid, order: usize) -> Self {
        let zero = Jet::constant(0.0, order);
        Immersion::from_fn(grid, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], order, |_, _| [zero, zero, zero])
    }

    pub fn grid(&self) -> PeriodicGrid {
        self.grid
    }

    pub fn linear_part(&self) -> [[f64; 3]; 2] {
        self.linear_part
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    /// Order of the stored jets (0 for sample-only immersions).
    pub fn jet_order(&self) -> usize {
        self.periodic[0][0].order()
    }

    /// Same map with a different derivative mode; analytic mode needs jets.
    pub fn with_mode(mut self, mode: DerivativeMode) -> Self {
        if mode == DerivativeMode::Analytic {
            assert!(self.jet_order() >= 1, "analytic derivatives need jets of order >= 1");
        }
        self.mode = mode;
        self
    }

    /// Drops jet coefficients above `order`.
    pub fn truncated(&self, order: usize) -> Self {
        let periodic = self.periodic.iter().map(|p| p.map(|c| c.truncate(order))).collect();
        Immersion::from_jets(self.grid, self.linear_part, periodic, self.mode)
    }

    pub fn periodic_jets(&self, node: usize) -> &[Jet; 3] {
        &self.periodic[node]
    }

    pub fn periodic_value(&self, node: usize) -> MinkVector {
        let p = &self.periodic[node];
        MinkVector::new(p[0].value(), p[1].value(), p[2].value())
    }

    fn linear_image(&self, x: f64, y: f64) -> MinkVector {
        let [a, b] = self.linear_part;
        MinkVector::new(a[0] * x + b[0] * y, a[1] * x + b[1] * y, a[2] * x + b[2] * y)
    }

    /// Image of node `(i, j)` translated by the lattice vector `(mx, my)`.
    pub fn position_at(&self, i: usize, j: usize, mx: i64, my: i64) -> MinkVector {
        let node = self.grid.index(i, j);
        let h = self.grid.spacing();
        let base = self.linear_image(i as f64 * h, j as f64 * h) + self.periodic_value(node);
        let [a, b] = self.linear_part;
        base + MinkVector::from_array(a) * mx as f64 + MinkVector::from_array(b) * my as f64
    }

    /// Image of a node in the fundamental domain.
    pub fn position(&self, node: usize) -> MinkVector {
        let (i, j) = self.grid.coords(node);
        self.position_at(i, j, 0, 0)
    }

    /// Jets of the full map (linear plus periodic part) at a node.
    pub fn full_jets(&self, node: usize) -> [Jet; 3] {
        let (x, y) = self.grid.point(node);
        let p = &self.periodic[node];
        let order = p[0].order();
        let [a, b] = self.linear_part;
        std::array::from_fn(|c| p[c] + Jet::affine(a[c] * x + b[c] * y, a[c], b[c], order))
    }

    /// Tangent vectors `(∂x f, ∂y f)` at a node.
    pub fn tangents(&self, node: usize) -> (MinkVector, MinkVector) {
        let [a, b] = self.linear_part;
        let (da, db) = match self.mode {
            DerivativeMode::Analytic => {
                let p = &self.periodic[node];
                (
                    MinkVector::new(p[0].coeff(1, 0), p[1].coeff(1, 0), p[2].coeff(1, 0)),
                    MinkVector::new(p[0].coeff(0, 1), p[1].coeff(0, 1), p[2].coeff(0, 1)),
                )
            }
            DerivativeMode::CenteredDifference => {
                let (i, j) = self.grid.coords(node);
                let g = &self.grid;
                let half = 0.5 / g.spacing();
                let dx = (self.periodic_value(g.offset(i, j, 1, 0)) - self.periodic_value(g.offset(i, j, -1, 0))) * half;
                let dy = (self.periodic_value(g.offset(i, j, 0, 1)) - self.periodic_value(g.offset(i, j, 0, -1))) * half;
                (dx, dy)
            }
        };
        (MinkVector::from_array(a) + da, MinkVector::from_array(b) + db)
    }

    /// Max node distance `|self − other|` (Euclidean coordinates).
    pub fn max_displacement(&self, other: &Immersion) -> f64 {
        (0..self.grid.len())
            .map(|k| (self.periodic_value(k) - other.periodic_value(k)).euclid_norm())
            .fold(0.0, f64::max)
    }
}

/// Induced metric `f*h` node-wise.
pub fn pullback(f: &Immersion) -> MetricField {
    let values = (0..f.grid.len())
        .into_par_iter()
        .map(|k| {
            let (tx, ty) = f.tangents(k);
            Sym2::new(lorentz_dot(tx, tx), lorentz_dot(tx, ty), lorentz_dot(ty, ty))
        })
        .collect();
    MetricField::new(f.grid, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric_grid::c0_distance;
    use std::f64::consts::PI;

    fn wavy(grid: PeriodicGrid, order: usize) -> Immersion {
        let zero = Jet::constant(0.0, order);
        Immersion::from_fn(grid, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], order, move |x, _| {
            [zero, zero, (x * (2.0 * PI)).sin() * 0.2]
        })
    }

    #[test]
    fn plane_pullbacks() {
        let grid = PeriodicGrid::new(8).unwrap();
        let flat = pullback(&Immersion::plane(grid, 1));
        assert!(flat.values().iter().all(|&s| s == Sym2::IDENTITY));
        let a = 0.6;
        let tilted = Immersion::from_fn(grid, [[1.0, 0.0, a], [0.0, 1.0, 0.0]], 1, |x, _| {
            [x * 0.0, x * 0.0, x * 0.0]
        });
        let m = pullback(&tilted);
        assert!(m.values().iter().all(|s| (s.e - (1.0 - a * a)).abs() < 1e-15 && s.f == 0.0 && s.g == 1.0));
    }

    #[test]
    fn wavy_pullback_at_origin() {
        let grid = PeriodicGrid::new(16).unwrap();
        let m = pullback(&wavy(grid, 1));
        let e0 = 1.0 - 0.16 * PI * PI;
        assert!((m.at(0).e - e0).abs() < 1e-14);
        for k in 0..grid.len() {
            let (x, _) = grid.point(k);
            let dz = 0.4 * PI * (2.0 * PI * x).cos();
            assert!((m.at(k).e - (1.0 - dz * dz)).abs() < 1e-14);
        }
    }

    #[test]
    fn centered_differences_are_second_order() {
        let mut errs = Vec::new();
        for n in [32, 64, 128] {
            let grid = PeriodicGrid::new(n).unwrap();
            let analytic = pullback(&wavy(grid, 1));
            let centered = pullback(&wavy(grid, 1).with_mode(DerivativeMode::CenteredDifference));
            errs.push(c0_distance(&analytic, &centered).unwrap());
        }
        for w in errs.windows(2) {
            let ratio = w[0] / w[1];
            assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
        }
    }

    #[test]
    fn lattice_translation_adds_linear_rows() {
        let grid = PeriodicGrid::new(8).unwrap();
        let f = wavy(grid, 1);
        for (i, j) in [(0, 0), (3, 5)] {
            let p = f.position_at(i, j, 0, 0);
            let q = f.position_at(i, j, 1, 0);
            let d = q - p;
            assert!((d.x - 1.0).abs() < 1e-15 && d.y.abs() < 1e-15 && d.z.abs() < 1e-15);
        }
    }
}
