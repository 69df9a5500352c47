//! The qubit clock: average entropy per reading against the bound, with
//! the closed-form average `2 ln 2 - 1` for comparison.

use qclock::bounds::{theorem1_audit, AuditOptions};
use qclock::gallery::make_rabi_clock;

fn main() -> qclock::Result<()> {
    for bandwidth in [0.5, 1.0, 4.0] {
        let clock = make_rabi_clock(bandwidth)?;
        let audit = theorem1_audit(&clock, &AuditOptions::default())?;
        let cert = audit.certificate.as_ref().expect("certified");
        println!(
            "dE = {bandwidth}: avg dS = {:.10} (closed form {:.10}), dt = {:.6}, bound = {:.6}, {:?}",
            audit.average.value,
            2.0 * 2f64.ln() - 1.0,
            cert.delta_t,
            audit.bound.unwrap(),
            audit.report.verdict
        );
    }
    Ok(())
}
