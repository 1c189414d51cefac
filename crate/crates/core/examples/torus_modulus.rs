//! Recovers the modulus of conformally scaled target metrics, of a
//! constant lattice metric and of a metric with varying anisotropy.
//!
//!     cargo run --release --example torus_modulus -- 128

use std::f64::consts::TAU;

use spacelike::metric_grid::{MetricField, PeriodicGrid, ScalarField, Sym2};
use spacelike::moduli::{build_target_metric, hyp_distance, torus_modulus, torus_modulus_detailed, UHPoint};

fn main() -> spacelike::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let grid = PeriodicGrid::new(n)?;
    let bumpy = ScalarField::from_fn(grid, |x, y| 1.0 + 0.3 * (TAU * x).cos() * (TAU * y).sin());

    for w in ["i", "2i", "0.3+1.2i", "-0.5+0.8i"] {
        let w = UHPoint::parse(w)?;
        for delta in [1.0, 0.25] {
            let sol = torus_modulus_detailed(&build_target_metric(&bumpy, w, delta))?;
            println!(
                "w = {w:<10} delta = {delta:<5} recovered {:.8} distance {:.2e} ({} CG iterations)",
                sol.w.to_complex(),
                hyp_distance(sol.w, w),
                sol.cg_iterations
            );
        }
    }
    let rectangle = torus_modulus(&MetricField::constant(grid, Sym2::new(1.0, 0.0, 4.0)))?;
    println!("dx² + 4dy² has modulus {}", rectangle.to_complex());

    // not conformal to a flat metric, so the harmonic solve does real work
    let wavy = MetricField::from_fn(grid, |x, y| Sym2::new(1.0 + 0.4 * (TAU * y).cos(), 0.2 * (TAU * x).sin(), 1.5));
    let sol = torus_modulus_detailed(&wavy)?;
    println!(
        "wavy metric has modulus {:.8} ({} CG iterations, residual {:.1e})",
        sol.w.to_complex(),
        sol.cg_iterations,
        sol.relative_residual
    );
    Ok(())
}
