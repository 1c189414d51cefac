//! Wavefront OBJ output.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metric_grid::Immersion;
use crate::rigidity::OrbitHull;

/// Polygon mesh with 0-based face indices.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<Vec<usize>>,
}

impl Mesh {
    /// `v x y z` lines with 17 significant digits, then 1-based `f` lines.
    pub fn to_obj(&self) -> String {
        let mut out = String::with_capacity(64 * self.vertices.len());
        for v in &self.vertices {
            writeln!(out, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2]).unwrap();
        }
        for f in &self.faces {
            out.push('f');
            for i in f {
                write!(out, " {}", i + 1).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write_obj(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_obj()).map_err(|e| Error::io(path, e))
    }
}

/// Quads of an `n × n` node grid (row-major, `x` fastest). With `wrap`, the
/// seam quads joining the last row and column to the first are included.
pub fn grid_quads(n: usize, wrap: bool) -> Vec<Vec<usize>> {
    let cells = if wrap { n } else { n.saturating_sub(1) };
    let mut faces = Vec::with_capacity(cells * cells);
    for j in 0..cells {
        for i in 0..cells {
            let (i1, j1) = ((i + 1) % n, (j + 1) % n);
            faces.push(vec![j * n + i, j * n + i1, j1 * n + i1, j1 * n + i]);
        }
    }
    faces
}

/// One period of the immersion as a quad mesh.
pub fn immersion_mesh(f: &Immersion, wrap: bool) -> Mesh {
    let grid = f.grid();
    Mesh {
        vertices: (0..grid.len()).map(|k| f.position(k).to_array()).collect(),
        faces: grid_quads(grid.n(), wrap),
    }
}

/// Hull vertices and triangles, renumbered densely.
pub fn hull_mesh(hull: &OrbitHull) -> Mesh {
    let mut index = vec![usize::MAX; hull.points.len()];
    for (k, &v) in hull.hull_vertices.iter().enumerate() {
        index[v] = k;
    }
    Mesh {
        vertices: hull.hull_vertices.iter().map(|&v| hull.points[v].to_array()).collect(),
        faces: hull.hull_faces.iter().map(|f| f.iter().map(|&v| index[v]).collect()).collect(),
    }
}

/// Writes an immersion (without seam faces) to `path`.
pub fn export_immersion_obj(f: &Immersion, path: &Path) -> Result<()> {
    immersion_mesh(f, false).write_obj(path)
}

pub fn export_hull_obj(hull: &OrbitHull, path: &Path) -> Result<()> {
    hull_mesh(hull).write_obj(path)
}
