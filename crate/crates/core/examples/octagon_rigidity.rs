//! Level bound of the octagon group's orbit hull as the word length grows,
//! and the comparison constants it yields.
//!
//!     cargo run --release --example octagon_rigidity -- 8

use std::time::Instant;

use spacelike::minkowski::MinkVector;
use spacelike::rigidity::{
    facet_level_alpha, make_genus2_group, rigidity_report, uniform_alpha, OrbitHull, DEFAULT_RADIUS, UNIFORM_SAMPLES,
};

fn main() -> spacelike::Result<()> {
    let max_len: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);
    let group = make_genus2_group()?;
    println!("boost length {:.16}, relator defect {:.2e}", group.boost_length, group.relator_defect());

    println!("{:>4} {:>10} {:>8} {:>20}", "L", "hull pts", "facets", "alpha");
    for len in 2..=max_len {
        let t = Instant::now();
        let hull = OrbitHull::from_orbit(&group, MinkVector::APEX, len, Some(DEFAULT_RADIUS))?;
        let alpha = facet_level_alpha(&hull)?;
        println!(
            "{len:>4} {:>10} {:>8} {alpha:>20.15} ({:.1?})",
            hull.points.len(),
            hull.base_facets(1e-9).len(),
            t.elapsed()
        );
    }

    let t = Instant::now();
    let uniform = uniform_alpha(&group, 5, UNIFORM_SAMPLES, DEFAULT_RADIUS)?;
    println!("uniform alpha over {0}x{0} base points: {1:.12} ({2:.1?})", UNIFORM_SAMPLES, uniform.alpha, t.elapsed());

    let run = rigidity_report(max_len.min(4), None)?;
    println!("{}", serde_json::to_string_pretty(&run.report).expect("report serializes"));
    Ok(())
}
