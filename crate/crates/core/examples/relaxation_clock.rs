//! Amplitude damping reads as a clock without generating any measurement
//! entropy: the populations move but the state never has coherences to
//! destroy.

use qclock::bounds::{min_grid_resolution, OutcomeTrajectory};
use qclock::gallery::{make_relaxation_clock, ProbePath};

fn main() -> qclock::Result<()> {
    let clock = make_relaxation_clock(1.0)?;
    let probe = clock.probe(ProbePath::Auto)?;
    let traj = OutcomeTrajectory::from_probe(probe.as_ref(), clock.horizon, 2049)?;
    let cert = min_grid_resolution(&traj).expect("populations cross");
    println!("minimal resolution {:.6} on [0, {:.1}]", cert.delta_t, clock.horizon);
    for k in 0..=8 {
        let t = clock.horizon * k as f64 / 8.0;
        println!("t = {t:.2}: p = {:?}, dS = {:.1e}", probe.probabilities(t)?, probe.entropy_increase(t)?);
    }
    Ok(())
}
