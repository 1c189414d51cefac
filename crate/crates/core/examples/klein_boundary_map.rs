//! Lifts Klein-disc directions to the lower boundary of the orbit hull and
//! reports the Minkowski level reached along each ray.
//!
//!     cargo run --release --example klein_boundary_map -- 4

use spacelike::minkowski::{cone_level, MinkVector};
use spacelike::rigidity::{make_genus2_group, OrbitHull, DEFAULT_RADIUS};

fn main() -> spacelike::Result<()> {
    let word_len: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let group = make_genus2_group()?;
    let hull = OrbitHull::from_orbit(&group, MinkVector::APEX, word_len, Some(DEFAULT_RADIUS))?;
    println!("{} hull points, {} lower faces", hull.points.len(), hull.lower_faces().len());

    let steps = 8;
    let half = 0.6;
    let mut highest = 0.0f64;
    for j in 0..=steps {
        let qy = -half + 2.0 * half * j as f64 / steps as f64;
        let row: Vec<String> = (0..=steps)
            .map(|i| {
                let qx = -half + 2.0 * half * i as f64 / steps as f64;
                match hull.ray_boundary_point((qx, qy)).ok().and_then(cone_level) {
                    Some(level) => {
                        highest = highest.max(level);
                        format!("{level:6.3}")
                    }
                    None => format!("{:>6}", "-"),
                }
            })
            .collect();
        println!("{}", row.join(" "));
    }
    println!("largest level on the sampled rays: {highest:.6}");
    Ok(())
}
