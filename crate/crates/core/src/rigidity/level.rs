use serde::Serialize;

use super::hull::OrbitHull;
use crate::error::{Error, Result};
use crate::minkowski::{lorentz_dot, MinkVector};

const MAX_ITER: usize = 200;
const GAP_TOLERANCE: f64 = 1e-10;

/// Maximum of the level over a polytope.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LevelMax {
    pub level: f64,
    pub point: MinkVector,
    pub iterations: usize,
    /// Final Frank–Wolfe gap of the level function.
    pub gap: f64,
}

/// `z² − x² − y²`.
fn square_level(x: MinkVector) -> f64 {
    -lorentz_dot(x, x)
}

/// Maximizes the level `sqrt(z² − x² − y²)` over the convex hull of
/// future timelike `vertices` with away-step Frank–Wolfe. The level is
/// concave there, and along any segment it peaks where its square does, so
/// each line search is solved in closed form.
pub fn maximize_level(vertices: &[MinkVector]) -> Result<LevelMax> {
    if vertices.is_empty() || vertices.iter().any(|v| !(v.z > 0.0 && square_level(*v) > 0.0)) {
        return Err(Error::DegenerateInput("level maximization needs future timelike vertices".into()));
    }
    let start = (0..vertices.len()).max_by(|&a, &b| square_level(vertices[a]).total_cmp(&square_level(vertices[b]))).unwrap();
    let mut weights = vec![0.0; vertices.len()];
    weights[start] = 1.0;
    let mut x = vertices[start];
    let mut gap = f64::INFINITY;
    let mut iterations = 0;
    while iterations < MAX_ITER {
        // ascent of the level along v − x is −⟨x, v − x⟩ / level(x)
        let score = |v: MinkVector| -lorentz_dot(x, v);
        let toward = (0..vertices.len()).max_by(|&a, &b| score(vertices[a]).total_cmp(&score(vertices[b]))).unwrap();
        let away = (0..vertices.len())
            .filter(|&k| weights[k] > 0.0)
            .min_by(|&a, &b| score(vertices[a]).total_cmp(&score(vertices[b])))
            .unwrap();
        let level = square_level(x).sqrt();
        gap = (score(vertices[toward]) - score(x)) / level;
        if gap <= GAP_TOLERANCE {
            break;
        }
        iterations += 1;
        let away_gain = (score(x) - score(vertices[away])) / level;
        let (d, max_step, is_away) = if gap >= away_gain || weights[away] >= 1.0 {
            (vertices[toward] - x, 1.0, false)
        } else {
            (x - vertices[away], weights[away] / (1.0 - weights[away]), true)
        };
        // q(x + γd) = q(x) − 2γ⟨x, d⟩ − γ²⟨d, d⟩
        let (slope, curvature) = (-lorentz_dot(x, d), -lorentz_dot(d, d));
        let step = if curvature < 0.0 { (slope / -curvature).min(max_step) } else { max_step };
        if step <= 0.0 {
            break;
        }
        if is_away {
            for w in weights.iter_mut() {
                *w *= 1.0 + step;
            }
            weights[away] -= step;
            if weights[away] < 1e-15 {
                weights[away] = 0.0;
            }
        } else {
            for w in weights.iter_mut() {
                *w *= 1.0 - step;
            }
            weights[toward] += step;
        }
        x = vertices.iter().zip(&weights).fold(MinkVector::default(), |acc, (v, &w)| acc + *v * w);
    }
    Ok(LevelMax { level: square_level(x).sqrt(), point: x, iterations, gap })
}

/// Level maximum over the whole hull (spanned by its vertices).
pub fn level_alpha(hull: &OrbitHull) -> Result<f64> {
    let verts: Vec<MinkVector> = hull.hull_vertices.iter().map(|&i| hull.points[i]).collect();
    Ok(maximize_level(&verts)?.level.max(1.0))
}

/// Level maximum over the lower facets through the base point.
///
/// Every lower facet of the full orbit hull is a group translate of one of
/// these, so this is the level bound of the whole lower boundary; the upper
/// faces of a truncated orbit are an artifact of the truncation.
pub fn facet_level_alpha(hull: &OrbitHull) -> Result<f64> {
    let facets = hull.base_facets(1e-9);
    if facets.is_empty() {
        return Err(Error::DegenerateInput("no lower facet contains the base point".into()));
    }
    let mut alpha: f64 = 1.0;
    for facet in facets {
        let verts: Vec<MinkVector> = facet.iter().map(|&i| hull.points[i]).collect();
        alpha = alpha.max(maximize_level(&verts)?.level);
    }
    Ok(alpha)
}
