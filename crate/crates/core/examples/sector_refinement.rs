//! Exploratory: how the average entropy of a circle clock grows as the arc
//! readout gets finer. More sectors resolve more, and cost more.

use qclock::bounds::average_entropy_increase;
use qclock::gallery::make_circle_clock;

fn main() -> qclock::Result<()> {
    let k = 16;
    for n in [2usize, 4, 8, 16, 32] {
        let clock = make_circle_clock(k, n)?;
        let avg = average_entropy_increase(&clock, 65)?;
        println!("k = {k}, {n:>2} sectors: avg dS = {:.6} (ln n = {:.6})", avg.value, (n as f64).ln());
    }
    Ok(())
}
