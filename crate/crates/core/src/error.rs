use std::path::PathBuf;

use crate::moduli::SearchTrace;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point has non-positive height z = {z}")]
    NonPositiveHeight { z: f64 },
    #[error("tangent plane is not spacelike (Gram determinant {gram_det:e})")]
    DegenerateTangentPlane { gram_det: f64 },
    #[error("grid mismatch: {left} vs {right} samples per axis")]
    GridMismatch { left: usize, right: usize },
    #[error("grid needs at least 8 samples per axis, got {n}")]
    GridTooSmall { n: usize },
    #[error("metric is not positive definite at node {node}")]
    NotPositiveDefinite { node: usize },
    #[error("defect leaves the span of the dictionary at node {node} (margin {margin:e})")]
    DefectOutsideCone { node: usize, margin: f64 },
    #[error("linear form ({a}, {b}) is not primitive")]
    NonPrimitiveForm { a: i64, b: i64 },
    #[error("immersion is not spacelike at node {node}")]
    NotSpacelike { node: usize },
    #[error("reduced metric is not Riemannian at node {node} (1/d^2 - eta = {slack:e})")]
    MetricNotRiemannian { node: usize, slack: f64 },
    #[error("amplitude target {target} is below one")]
    TargetBelowOne { target: f64 },
    #[error("intermediate metric of stage {stage} is not Riemannian")]
    IntermediateMetricNotRiemannian { stage: usize },
    #[error("pipeline needs jets of order {needed}, immersion carries {available}")]
    InsufficientJetOrder { needed: usize, available: usize },
    #[error("{solver} did not converge ({detail})")]
    SolverDiverged { solver: &'static str, detail: String },
    #[error("no admissible longness scale above 2^-40")]
    NoAdmissibleDelta,
    #[error("conformal search failed after {} evaluations", trace.rows.len())]
    SearchFailed { trace: Box<SearchTrace> },
    #[error("relator not satisfied (defect {defect:e})")]
    RelatorNotSatisfied { defect: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("level bound must exceed one, got {alpha}")]
    AlphaNotAboveOne { alpha: f64 },
    #[error("graph is not spacelike at node ({i}, {j})")]
    NotSpacelikeGraph { i: usize, j: usize },
    #[error("ray through ({qx}, {qy}) misses the hull")]
    RayMissesHull { qx: f64, qy: f64 },
    #[error("config error at {key} (line {line}): {message}")]
    ConfigError { key: String, line: usize, message: String },
    #[error("i/o error on {path}: {source}")]
    IoError {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::IoError { path: path.into(), source }
    }

    /// Stable machine-readable name, used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonPositiveHeight { .. } => "NonPositiveHeight",
            Error::DegenerateTangentPlane { .. } => "DegenerateTangentPlane",
            Error::GridMismatch { .. } => "GridMismatch",
            Error::GridTooSmall { .. } => "GridTooSmall",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::DefectOutsideCone { .. } => "DefectOutsideCone",
            Error::NonPrimitiveForm { .. } => "NonPrimitiveForm",
            Error::NotSpacelike { .. } => "NotSpacelike",
            Error::MetricNotRiemannian { .. } => "MetricNotRiemannian",
            Error::TargetBelowOne { .. } => "TargetBelowOne",
            Error::IntermediateMetricNotRiemannian { .. } => "IntermediateMetricNotRiemannian",
            Error::InsufficientJetOrder { .. } => "InsufficientJetOrder",
            Error::SolverDiverged { .. } => "SolverDiverged",
            Error::NoAdmissibleDelta => "NoAdmissibleDelta",
            Error::SearchFailed { .. } => "SearchFailed",
            Error::RelatorNotSatisfied { .. } => "RelatorNotSatisfied",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::AlphaNotAboveOne { .. } => "AlphaNotAboveOne",
            Error::NotSpacelikeGraph { .. } => "NotSpacelikeGraph",
            Error::RayMissesHull { .. } => "RayMissesHull",
            Error::ConfigError { .. } => "ConfigError",
            Error::IoError { .. } => "IoError",
        }
    }
}
