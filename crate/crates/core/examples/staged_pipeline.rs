//! Shrinks the flat torus metric by a defect spread over all four
//! dictionary forms and removes it stage by stage with automatically chosen
//! corrugation numbers.
//!
//!     cargo run --release --example staged_pipeline -- 64 2e-3

use std::f64::consts::TAU;

use spacelike::corrugation::{run_pipeline, NPolicy};
use spacelike::defect::{cone_margin, decompose, default_dictionary};
use spacelike::metric_grid::{c0_distance, pullback, Immersion, MetricField, PeriodicGrid, Sym2};

fn main() -> spacelike::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(64);
    let epsilon: f64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(2e-3);
    let grid = PeriodicGrid::new(n)?;
    let plane = Immersion::plane(grid, 6);

    let defect = MetricField::from_fn(grid, |x, y| {
        let s = 0.2 + 0.03 * (TAU * x).sin() * (TAU * y).cos();
        Sym2::new(s, 0.02 * (TAU * (x + y)).cos(), s)
    });
    println!("cone margin of the defect: {:.4}", cone_margin(&defect));
    let target = pullback(&plane).sub(&defect)?;
    let decomposition = decompose(&defect, &default_dictionary())?;

    let result = run_pipeline(&plane, &decomposition, &NPolicy::auto(epsilon))?;
    for s in &result.stages {
        println!(
            "stage {} form {:<7} N = {:<6} error {:.3e} min eigenvalue {:.4} ({} tries)",
            s.term, s.form, s.n_corr, s.c0_error, s.min_eigenvalue, s.attempts
        );
    }
    let total = c0_distance(&pullback(&result.immersion), &target)?;
    println!("final distance to the target {total:.3e} (budget {epsilon:e})");
    Ok(())
}
