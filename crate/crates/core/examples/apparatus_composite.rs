//! Reading the qubit clock through a CNOT onto an apparatus qubit. The
//! apparatus energy scale does not matter because its state is stationary.

use qclock::bounds::{theorem2_audit, AuditOptions};
use qclock::gallery::make_rabi_clock;
use qclock::measurement::{cnot, compose_with_apparatus, ProjectiveMeasurement};
use qclock::quantum::{DensityMatrix, Operator};

fn main() -> qclock::Result<()> {
    let clock = make_rabi_clock(1.0)?;
    let h = clock.generator.hamiltonian().unwrap().clone();
    let gamma = DensityMatrix::basis_state(2, 0);
    let pointer = ProjectiveMeasurement::computational_basis(2);
    let options = AuditOptions { delta_t: Some(clock.horizon), ..Default::default() };
    for energy in [1.0, 1e3] {
        let h_app = Operator::diagonal(&[0.0, energy]);
        let composite = compose_with_apparatus(&clock.initial, &gamma, &h_app, &cnot(), &pointer)?;
        let audit = theorem2_audit(&composite, &h, &h_app, clock.horizon, &options)?;
        println!("apparatus energy {energy:>6}: {}", audit.report);
    }
    Ok(())
}
