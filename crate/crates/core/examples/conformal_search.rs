//! Searches the ball around a target modulus for the corrugated plane
//! whose induced conformal structure hits it.
//!
//!     cargo run --release --example conformal_search -- 0.05+1.0i 128

use std::time::Instant;

use spacelike::metric_grid::{Immersion, PeriodicGrid};
use spacelike::moduli::{conformal_search, SearchConfig, UHPoint};

fn main() -> spacelike::Result<()> {
    let mut args = std::env::args().skip(1);
    let w0 = UHPoint::parse(&args.next().unwrap_or_else(|| "0.05+1.0i".into()))?;
    let n: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(128);

    let plane = Immersion::plane(PeriodicGrid::new(n)?, 6);
    let cfg = SearchConfig::default();
    let start = Instant::now();
    let out = match conformal_search(&plane, w0, &cfg) {
        Ok(out) => out,
        Err(spacelike::Error::SearchFailed { trace }) => {
            eprint!("{}", trace.to_csv());
            return Err(spacelike::Error::SearchFailed { trace });
        }
        Err(e) => return Err(e),
    };
    print!("{}", out.trace.to_csv());
    println!("delta = {}, N = {:?}", out.delta, out.n_corr);
    println!(
        "w* = {}  G(w*) = {}  distance {:.3e}  after {} evaluations ({:.1?})",
        out.w_star,
        out.g_star,
        out.trace.rows.last().map_or(f64::NAN, |r| r.best_so_far),
        out.evaluations(),
        start.elapsed()
    );
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    Ok(())
}
