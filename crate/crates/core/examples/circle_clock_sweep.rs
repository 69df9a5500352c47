//! Average entropy of the circle clock with four arc sectors as the number
//! of Fourier modes grows, with log-log slopes between successive sizes.

use qclock::bounds::{theorem1_audit, AuditOptions};
use qclock::gallery::make_circle_clock;

fn main() -> qclock::Result<()> {
    let mut last: Option<(f64, f64)> = None;
    for k in [8usize, 16, 32, 64] {
        let clock = make_circle_clock(k, 4)?;
        let audit = theorem1_audit(&clock, &AuditOptions::default())?;
        let avg = audit.average.value;
        let slope = last.map(|(k0, s0)| (avg / s0).log2() / (k as f64 / k0).log2());
        println!(
            "k = {k:>2}: avg dS = {avg:.6}, bound = {:.3e}, {:?}{}",
            audit.bound.unwrap(),
            audit.report.verdict,
            slope.map_or(String::new(), |s| format!(", slope {s:.3}"))
        );
        last = Some((k as f64, avg));
    }
    Ok(())
}
