use serde::Serialize;

use super::step::{corrugate_with_diagnostics, CorrugationStep};
use crate::defect::{Decomposition, LinearFormZ};
use crate::error::{Error, Result};
use crate::metric_grid::{c0_distance, pullback, DerivativeMode, Immersion};

/// How corrugation numbers are chosen per stage.
#[derive(Clone, Debug, PartialEq)]
pub enum NPolicy {
    /// One number per decomposition term (terms with `η ≡ 0` ignore theirs).
    Fixed(Vec<u64>),
    /// Grow `N ← 2N + 1` from `n_start` (or the previous stage's number,
    /// whichever is larger) until the stage error is within
    /// `epsilon / #active stages`. Odd numbers keep the phase `Nℓ(p)`
    /// from aliasing on power-of-two grids.
    Auto { epsilon: f64, n_start: u64, n_max: u64 },
}

impl NPolicy {
    pub fn auto(epsilon: f64) -> Self {
        NPolicy::Auto { epsilon, n_start: 9, n_max: 1 << 40 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageReport {
    /// Index of the term in the decomposition.
    pub term: usize,
    pub form: String,
    pub n_corr: u64,
    /// `‖F_j*h − μ_j‖` at the nodes.
    pub c0_error: f64,
    /// Smallest eigenvalue of `F_j*h` relative to the identity form.
    pub min_eigenvalue: f64,
    pub max_alpha: f64,
    pub max_displacement: f64,
    pub attempts: usize,
}

#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub immersion: Immersion,
    pub stages: Vec<StageReport>,
}

impl PipelineResult {
    /// Corrugation number used for each decomposition term (`None` when skipped).
    pub fn n_per_term(&self, terms: usize) -> Vec<Option<u64>> {
        let mut out = vec![None; terms];
        for s in &self.stages {
            out[s.term] = Some(s.n_corr);
        }
        out
    }
}

/// Applies one corrugation per nonzero decomposition term, in order.
///
/// Each stage corrugates against `μ_j = F_{j−1}*h − η_j ℓ_j⊗ℓ_j`, which
/// must be positive definite. Analytic immersions need jets of order at
/// least one more than the number of active stages; higher orders are
/// truncated away.
pub fn run_pipeline(f0: &Immersion, decomposition: &Decomposition, policy: &NPolicy) -> Result<PipelineResult> {
    if let NPolicy::Fixed(ns) = policy {
        if ns.len() != decomposition.terms.len() {
            return Err(Error::DegenerateInput(format!(
                "{} corrugation numbers for {} terms",
                ns.len(),
                decomposition.terms.len()
            )));
        }
    }
    let active: Vec<usize> = decomposition
        .terms
        .iter()
        .enumerate()
        .filter(|(_, (_, eta))| !eta.is_identically_zero())
        .map(|(k, _)| k)
        .collect();

    let mut current = if f0.mode() == DerivativeMode::Analytic {
        let needed = active.len() + 1;
        if f0.jet_order() < needed {
            return Err(Error::InsufficientJetOrder { needed, available: f0.jet_order() });
        }
        f0.truncated(needed)
    } else {
        f0.clone()
    };

    let mut stages = Vec::with_capacity(active.len());
    let mut previous_n = 0;
    for &term in &active {
        let (form, eta) = &decomposition.terms[term];
        let probe = CorrugationStep { form: *form, eta: eta.clone(), n_corr: 1 };
        let mu = probe.reduced_metric(&current)?;
        if !mu.is_positive_definite() {
            return Err(Error::IntermediateMetricNotRiemannian { stage: term });
        }
        let run = |n: u64| -> Result<(Immersion, StageReport)> {
            let step = CorrugationStep::new(*form, eta.clone(), n)?;
            let (next, diag) = corrugate_with_diagnostics(&current, &step)?;
            let g = pullback(&next);
            let report = StageReport {
                term,
                form: form_label(*form),
                n_corr: n,
                c0_error: c0_distance(&g, &mu)?,
                min_eigenvalue: g.values().iter().map(|s| s.eigenvalues().0).fold(f64::INFINITY, f64::min),
                max_alpha: diag.max_alpha,
                max_displacement: diag.max_displacement,
                attempts: 1,
            };
            Ok((next, report))
        };
        let (next, report) = match policy {
            NPolicy::Fixed(ns) => run(ns[term])?,
            NPolicy::Auto { epsilon, n_start, n_max } => {
                let budget = epsilon / active.len() as f64;
                let mut n = (*n_start).max(previous_n);
                let mut attempts = 0;
                loop {
                    attempts += 1;
                    let (next, mut report) = run(n)?;
                    if report.c0_error <= budget {
                        report.attempts = attempts;
                        break (next, report);
                    }
                    n = 2 * n + 1;
                    if n > *n_max {
                        return Err(Error::SolverDiverged {
                            solver: "corrugation number search",
                            detail: format!(
                                "stage {term}: error {:e} above budget {budget:e} at N = {}",
                                report.c0_error, report.n_corr
                            ),
                        });
                    }
                }
            }
        };
        if !pullback(&next).is_positive_definite() {
            return Err(Error::IntermediateMetricNotRiemannian { stage: term });
        }
        previous_n = report.n_corr;
        stages.push(report);
        current = next;
    }
    Ok(PipelineResult { immersion: current, stages })
}

fn form_label(form: LinearFormZ) -> String {
    form.to_string()
}
