//! The corrugation process: adapted frames, loop amplitudes, one-step
//! corrugation and the staged pipeline.

mod frame;
mod loops;
mod pipeline;
mod step;

pub use frame::{adapted_frame, solve_amplitudes, FramePoint};
pub use loops::{loop_integrals, loop_integrals_jet, loop_integrals_quadrature};
pub use pipeline::{run_pipeline, NPolicy, PipelineResult, StageReport};
pub use step::{corrugate_once, corrugate_with_diagnostics, target_differential_check, CorrugationStep, StepDiagnostics};
