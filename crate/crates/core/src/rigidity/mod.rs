//! Level bounds for the convex hull of a cocompact orbit on the unit
//! hyperboloid, and the comparison constants they give for invariant convex
//! spacelike surfaces.

mod graph;
mod group;
mod hull;
mod level;
mod orbit;
mod predicates;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::minkowski::MinkVector;

pub use graph::{hyperboloid_metric, two_sided_bound, verify_convex_graph, BoundCheck, GraphCheck, GraphField, GraphGrid};
pub use group::{make_genus2_group, FuchsianGroup, Letter};
pub use hull::{base_klein, convex_hull3, ray_boundary_point, OrbitHull};
pub use level::{facet_level_alpha, level_alpha, maximize_level, LevelMax};
pub use orbit::{hyperboloid_distance, orbit};
pub use predicates::orient3d;

/// Orbit points farther than this from the base point are dropped before the
/// hull is built; lower facets through the base point only involve its
/// near neighbours.
pub const DEFAULT_RADIUS: f64 = 7.0;

/// Samples per axis of the base-point grid for the uniform bound.
pub const UNIFORM_SAMPLES: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RigidityConstants {
    pub alpha: f64,
    /// `α²`.
    pub big_c: f64,
    /// `1 − 1/α²`.
    pub small_c: f64,
    /// `1/α²`: the slope bound `a² ≤ c` leaves `(1 − c)(dx² + dy²)` of the
    /// graph metric.
    pub c_prime: f64,
}

pub fn rigidity_constants(alpha: f64) -> Result<RigidityConstants> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::AlphaNotAboveOne { alpha });
    }
    let inv = 1.0 / (alpha * alpha);
    Ok(RigidityConstants { alpha, big_c: alpha * alpha, small_c: 1.0 - inv, c_prime: inv })
}

/// Whether the line `z = a t + r` in the `(x, z)` plane crosses the level-`α`
/// hyperbola `x² − z² = −α²` twice.
pub fn line_meets_level(a: f64, r: f64, alpha: f64) -> bool {
    a * a > 1.0 - r * r / (alpha * alpha)
}

/// Base points on a `samples × samples` Klein grid filling the square
/// inscribed in the fundamental octagon centered at the apex.
pub fn uniform_base_points(group: &FuchsianGroup, samples: usize) -> Vec<MinkVector> {
    // Klein inradius of the octagon is tanh(ℓ/2); the square's corners sit on
    // the sides whose midpoints point along the diagonals
    let half = (0.5 * group.boost_length).tanh() / std::f64::consts::SQRT_2;
    let coord = |k: usize| if samples == 1 { 0.0 } else { -half + 2.0 * half * k as f64 / (samples - 1) as f64 };
    let mut out = Vec::with_capacity(samples * samples);
    for j in 0..samples {
        for i in 0..samples {
            out.push(MinkVector::from_klein(coord(i), coord(j), 1.0));
        }
    }
    out
}

/// Largest facet level bound over the sampled base points.
#[derive(Clone, Debug, Serialize)]
pub struct UniformAlpha {
    pub alpha: f64,
    pub samples_per_axis: usize,
    pub word_len: usize,
    pub per_point: Vec<f64>,
}

pub fn uniform_alpha(group: &FuchsianGroup, word_len: usize, samples: usize, radius: f64) -> Result<UniformAlpha> {
    let per_point = uniform_base_points(group, samples)
        .par_iter()
        .map(|&p| facet_level_alpha(&OrbitHull::from_orbit(group, p, word_len, Some(radius))?))
        .collect::<Result<Vec<f64>>>()?;
    let alpha = per_point.iter().copied().fold(1.0, f64::max);
    Ok(UniformAlpha { alpha, samples_per_axis: samples, word_len, per_point })
}

/// Summary written by the `rigidity` command.
#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub word_len: usize,
    pub orbit_size: usize,
    pub hull_points: usize,
    pub radius: f64,
    pub alpha: f64,
    #[serde(rename = "C")]
    pub big_c: f64,
    #[serde(rename = "c")]
    pub small_c: f64,
    #[serde(rename = "C_prime")]
    pub c_prime: f64,
    /// `C′ = 1/α²` is derived from the slope bound rather than stated.
    pub c_prime_rule: &'static str,
    /// `(α(L) − α(L − 2)) / α(L − 2)`, when `L − 2 ≥ 1`.
    pub stabilization_ratio: Option<f64>,
    /// Level maximum over the whole truncated hull, upper faces included.
    pub hull_alpha: f64,
    pub boost_length: f64,
    pub relator_defect: f64,
    pub uniform: Option<UniformAlpha>,
}

/// Everything the `rigidity` command needs.
#[derive(Clone, Debug)]
pub struct RigidityRun {
    pub report: RigidityReport,
    pub hull: OrbitHull,
}

/// Octagon-group rigidity constants at the apex for words up to `word_len`,
/// with the uniform bound over base points at `uniform_word_len` if given.
pub fn rigidity_report(word_len: usize, uniform_word_len: Option<usize>) -> Result<RigidityRun> {
    if word_len == 0 {
        return Err(Error::DegenerateInput("word length must be positive".into()));
    }
    let group = make_genus2_group()?;
    let full = orbit(&group, MinkVector::APEX, word_len)?;
    let orbit_size = full.len();
    let near: Vec<MinkVector> =
        full.into_iter().filter(|&q| hyperboloid_distance(MinkVector::APEX, q) <= DEFAULT_RADIUS).collect();
    let hull = convex_hull3(&near)?;
    let alpha = facet_level_alpha(&hull)?;
    let constants = rigidity_constants(alpha)?;
    let stabilization_ratio = if word_len >= 3 {
        let earlier = facet_level_alpha(&OrbitHull::from_orbit(&group, MinkVector::APEX, word_len - 2, Some(DEFAULT_RADIUS))?)?;
        Some((alpha - earlier) / earlier)
    } else {
        None
    };
    let uniform = uniform_word_len.map(|l| uniform_alpha(&group, l, UNIFORM_SAMPLES, DEFAULT_RADIUS)).transpose()?;
    let report = RigidityReport {
        word_len,
        orbit_size,
        hull_points: hull.points.len(),
        radius: DEFAULT_RADIUS,
        alpha,
        big_c: constants.big_c,
        small_c: constants.small_c,
        c_prime: constants.c_prime,
        c_prime_rule: "derived: 1/alpha^2",
        stabilization_ratio,
        hull_alpha: level_alpha(&hull)?,
        boost_length: group.boost_length,
        relator_defect: group.relator_defect(),
        uniform,
    };
    Ok(RigidityRun { report, hull })
}
