//! Searching rank-one measurements of the qubit clock for the smallest
//! average entropy that still resolves half a period.

use qclock::gallery::make_rabi_clock;
use qclock::tightness::{minimize, SearchConfig};

fn main() -> qclock::Result<()> {
    let clock = make_rabi_clock(1.0)?;
    let config = SearchConfig { restarts: 4, rng_seed: 3, ..Default::default() };
    let result = minimize(&clock, &config)?;
    println!("evaluations: {}", result.trace.len());
    for r in &result.restarts {
        println!("restart {}: avg dS = {:.8}, feasible = {}", r.restart, r.best_average, r.feasible);
    }
    println!(
        "best avg dS = {:.8}, bound = {:.8}, gap ratio = {:.3}",
        result.best_average,
        result.bound.unwrap(),
        result.gap_ratio.unwrap()
    );
    println!("iterates below the bound: {}", result.bound_violations().len());
    Ok(())
}
