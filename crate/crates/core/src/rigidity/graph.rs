use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric_grid::Sym2;

/// Square grid with `n` nodes per axis on `[−half_width, half_width]²`,
/// boundary nodes included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GraphGrid {
    pub n: usize,
    pub half_width: f64,
}

impl GraphGrid {
    pub fn new(n: usize, half_width: f64) -> Result<Self> {
        if n < 3 || !(half_width > 0.0) {
            return Err(Error::DegenerateInput(format!("graph grid needs n ≥ 3 and positive width, got {n}, {half_width}")));
        }
        Ok(GraphGrid { n, half_width })
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n - 1) as f64
    }

    pub fn coord(&self, i: usize) -> f64 {
        -self.half_width + self.spacing() * i as f64
    }
}

/// Height function `u(x, y)` of a graph `z = u` sampled on a [`GraphGrid`].
#[derive(Clone, Debug)]
pub struct GraphField {
    grid: GraphGrid,
    values: Vec<f64>,
}

impl GraphField {
    pub fn from_fn(grid: GraphGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut values = Vec::with_capacity(grid.n * grid.n);
        for j in 0..grid.n {
            for i in 0..grid.n {
                values.push(f(grid.coord(i), grid.coord(j)));
            }
        }
        GraphField { grid, values }
    }

    pub fn grid(&self) -> GraphGrid {
        self.grid
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.grid.n + i]
    }

    /// Centered `(u_x, u_y, u_xx, u_xy, u_yy)` at an interior node.
    pub fn derivatives(&self, i: usize, j: usize) -> [f64; 5] {
        let h = self.grid.spacing();
        let u = |di: isize, dj: isize| self.at((i as isize + di) as usize, (j as isize + dj) as usize);
        [
            (u(1, 0) - u(-1, 0)) / (2.0 * h),
            (u(0, 1) - u(0, -1)) / (2.0 * h),
            (u(1, 0) - 2.0 * u(0, 0) + u(-1, 0)) / (h * h),
            (u(1, 1) - u(1, -1) - u(-1, 1) + u(-1, -1)) / (4.0 * h * h),
            (u(0, 1) - 2.0 * u(0, 0) + u(0, -1)) / (h * h),
        ]
    }

    /// Induced metric `dx² + dy² − du²` at an interior node.
    pub fn induced_metric(&self, i: usize, j: usize) -> Sym2 {
        let [ux, uy, ..] = self.derivatives(i, j);
        Sym2::new(1.0 - ux * ux, -ux * uy, 1.0 - uy * uy)
    }
}

/// Output of [`verify_convex_graph`]; fields are over interior nodes,
/// row-major with `n − 2` entries per row.
#[derive(Clone, Debug, Serialize)]
pub struct GraphCheck {
    pub curvature: Vec<f64>,
    /// `min(1 − u_x² − u_y²)`.
    pub min_slack: f64,
    pub spacelike: bool,
    /// Hessian positive semidefinite at every node (up to 1e−8).
    pub convex: bool,
}

/// Curvature `−(u_xx u_yy − u_xy²) / (1 − u_x² − u_y²)²` of a spacelike
/// graph by second-order centered differences.
pub fn verify_convex_graph(u: &GraphField) -> Result<GraphCheck> {
    let n = u.grid.n;
    let mut curvature = Vec::with_capacity((n - 2) * (n - 2));
    let mut min_slack = f64::INFINITY;
    let mut convex = true;
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let [ux, uy, uxx, uxy, uyy] = u.derivatives(i, j);
            let slack = 1.0 - ux * ux - uy * uy;
            if !(slack > 0.0) {
                return Err(Error::NotSpacelikeGraph { i, j });
            }
            min_slack = min_slack.min(slack);
            let det = uxx * uyy - uxy * uxy;
            convex &= uxx >= -1e-8 && uyy >= -1e-8 && det >= -1e-8;
            curvature.push(-det / (slack * slack));
        }
    }
    Ok(GraphCheck { curvature, min_slack, spacelike: true, convex })
}

/// Metric of the unit hyperboloid graph `sqrt(1 + x² + y²)` at `(x, y)`.
pub fn hyperboloid_metric(x: f64, y: f64) -> Sym2 {
    let s = 1.0 + x * x + y * y;
    Sym2::new(1.0 - x * x / s, -x * y / s, 1.0 - y * y / s)
}

/// Extreme generalized eigenvalues of the graph metric against the unit
/// hyperboloid metric over interior nodes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundCheck {
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub big_c: f64,
    pub holds: bool,
}

/// Checks `(1/C) h ≤ m ≤ C h` node-wise.
pub fn two_sided_bound(u: &GraphField, big_c: f64) -> Result<BoundCheck> {
    let n = u.grid.n;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for j in 1..n - 1 {
        for i in 1..n - 1 {
            let m = u.induced_metric(i, j);
            if !m.is_positive_definite() {
                return Err(Error::NotSpacelikeGraph { i, j });
            }
            let (a, b) = m.pencil_eigenvalues(&hyperboloid_metric(u.grid.coord(i), u.grid.coord(j)));
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    Ok(BoundCheck { min_ratio: lo, max_ratio: hi, big_c, holds: lo >= 1.0 / big_c && hi <= big_c })
}
