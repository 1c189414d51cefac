//! Writes a corrugated torus and an orbit hull as OBJ meshes.
//!
//!     cargo run --release --example export_meshes -- meshes

use std::f64::consts::TAU;
use std::path::PathBuf;

use spacelike::corrugation::{corrugate_once, CorrugationStep};
use spacelike::defect::LinearFormZ;
use spacelike::export::{export_hull_obj, export_immersion_obj};
use spacelike::metric_grid::{Immersion, PeriodicGrid, ScalarField};
use spacelike::minkowski::MinkVector;
use spacelike::rigidity::{make_genus2_group, OrbitHull, DEFAULT_RADIUS};

fn main() -> spacelike::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "meshes".into()));
    std::fs::create_dir_all(&dir).map_err(|e| spacelike::Error::IoError { path: dir.clone(), source: e })?;

    let grid = PeriodicGrid::new(128)?;
    let eta = ScalarField::from_fn(grid, |_, y| 0.5 + 0.25 * (TAU * y).cos());
    let step = CorrugationStep::new(LinearFormZ::DX, eta, 12)?;
    let torus = corrugate_once(&Immersion::plane(grid, 2), &step)?;
    export_immersion_obj(&torus, &dir.join("corrugated.obj"))?;

    let hull = OrbitHull::from_orbit(&make_genus2_group()?, MinkVector::APEX, 3, Some(DEFAULT_RADIUS))?;
    export_hull_obj(&hull, &dir.join("hull.obj"))?;
    println!("wrote {} and {}", dir.join("corrugated.obj").display(), dir.join("hull.obj").display());
    Ok(())
}
