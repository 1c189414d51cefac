//! One corrugation of the flat plane along `dx`, swept over the corrugation
//! number. The error of the induced metric against the target falls like 1/N.
//!
//!     cargo run --release --example corrugate_plane -- 256

use std::f64::consts::TAU;

use spacelike::corrugation::{corrugate_once, target_differential_check, CorrugationStep};
use spacelike::defect::LinearFormZ;
use spacelike::metric_grid::{c0_distance, pullback, Immersion, PeriodicGrid, ScalarField};

fn main() -> spacelike::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(256);
    let grid = PeriodicGrid::new(n)?;
    let plane = Immersion::plane(grid, 2);
    let eta = ScalarField::from_fn(grid, |_, y| 0.75 - 0.125 * (1.0 - (TAU * y).cos()));

    let mut points = Vec::new();
    println!("{:>6} {:>14} {:>14}", "N", "c0 error", "differential");
    for n_corr in [50u64, 100, 200, 400] {
        let step = CorrugationStep::new(LinearFormZ::DX, eta.clone(), n_corr)?;
        let target = step.reduced_metric(&plane)?;
        let f = corrugate_once(&plane, &step)?;
        let err = c0_distance(&pullback(&f), &target)?;
        println!("{n_corr:>6} {err:>14.6e} {:>14.3e}", target_differential_check(&plane, &step)?);
        points.push(((n_corr as f64).ln(), err.ln()));
    }
    let m = points.len() as f64;
    let (sx, sy) = points.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let slope = points.iter().map(|&(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / points.iter().map(|&(x, _)| (x - mx).powi(2)).sum::<f64>();
    println!("log-log slope {slope:.4}");
    Ok(())
}
