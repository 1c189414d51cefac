//! Solves `I₀(α) = y` for the corrugation amplitude and checks the answer
//! against the loop average `(1/2π)∫ exp(α cos s) ds` by quadrature.
//!
//!     cargo run --example amplitude_solver -- 1 1.5 2 5 20

use std::f64::consts::{PI, TAU};

use spacelike::bessel::inverse_i0;
use spacelike::quadrature::adaptive_simpson;

fn main() -> spacelike::Result<()> {
    let mut targets: Vec<f64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    if targets.is_empty() {
        targets = vec![1.0, 1.5, 2.0, 5.0, 20.0];
    }
    println!("{:>8} {:>22} {:>12}", "y", "alpha", "residual");
    for y in targets {
        let alpha = inverse_i0(y)?;
        let average = adaptive_simpson(|s| (alpha * s.cos()).exp(), 0.0, PI, 1e-13) * 2.0 / TAU;
        println!("{y:>8} {alpha:>22.16} {:>12.2e}", average - y);
    }
    Ok(())
}
