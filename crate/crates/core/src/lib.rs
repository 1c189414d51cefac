pub mod bessel;
pub mod cli;
pub mod corrugation;
pub mod defect;
pub mod error;
pub mod export;
pub mod jet;
pub mod metric_grid;
pub mod minkowski;
pub mod moduli;
pub mod quadrature;
pub mod rigidity;

pub use error::{Error, Result};
