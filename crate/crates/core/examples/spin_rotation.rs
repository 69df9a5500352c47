//! A spin used as a protractor: the rotation angle plays the role of time
//! and `dE` becomes the spin length `k`.

use std::f64::consts::PI;

use qclock::bounds::{theorem1_audit, AuditOptions};
use qclock::gallery::make_spin_rotation_clock;

fn main() -> qclock::Result<()> {
    for k in [1usize, 2, 4] {
        let clock = make_spin_rotation_clock(k, 0.9 * PI)?;
        let audit = theorem1_audit(&clock, &AuditOptions::default())?;
        let da = audit.certificate.as_ref().unwrap().delta_t;
        println!(
            "k = {k}: {} sectors, d_alpha = {da:.6}, avg dS = {:.6}, 1/(2 (k d_alpha)^2) = {:.6}, {:?}",
            clock.measurement.len(),
            audit.average.value,
            0.5 / (k as f64 * da).powi(2),
            audit.report.verdict
        );
    }
    Ok(())
}
