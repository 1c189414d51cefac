//! Checks that the graph of `sqrt(a² + x² + y²)` is a convex spacelike
//! surface of curvature `−1/a²`, and compares its metric with the unit
//! hyperboloid's using the octagon group's level bound.
//!
//!     cargo run --release --example convex_graph -- 128

use spacelike::rigidity::{
    rigidity_constants, rigidity_report, two_sided_bound, verify_convex_graph, GraphField, GraphGrid,
};

fn main() -> spacelike::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let alpha = rigidity_report(4, None)?.report.alpha;
    let constants = rigidity_constants(alpha)?;
    let grid = GraphGrid::new(n, 1.0)?;

    for level in [1.0, alpha] {
        let u = GraphField::from_fn(grid, |x, y| (level * level + x * x + y * y).sqrt());
        let check = verify_convex_graph(&u)?;
        let worst = check.curvature.iter().map(|k| (k + 1.0 / (level * level)).abs()).fold(0.0, f64::max);
        let bound = two_sided_bound(&u, constants.big_c)?;
        println!(
            "a = {level:.6}: convex {} curvature error {worst:.2e} metric ratio in [{:.4}, {:.4}] within C = {:.4}: {}",
            check.convex, bound.min_ratio, bound.max_ratio, bound.big_c, bound.holds
        );
    }
    Ok(())
}
