use std::f64::consts::PI;

use super::circle::{sector_clock, CircleProbe};
use super::instance::ClockInstance;
use crate::bounds::{time_resolution, OutcomeTrajectory};
use crate::dynamics::Generator;
use crate::error::{Error, Result};
use crate::measurement::ProjectiveMeasurement;
use crate::quantum::{DensityMatrix, Operator};

/// Grid used when constructors certify a resolution themselves.
pub const CONSTRUCTOR_GRID_POINTS: usize = 2049;

/// Largest sector count tried by [`make_spin_rotation_clock`].
pub const MAX_SPIN_SECTORS: usize = 32;

/// Two-level clock `H = (ΔE/2)σ_x` from `|0>`, read out in the `Z` basis:
/// `p₁(t) = sin²(ΔE t/2)`, horizon half a period.
pub fn make_rabi_clock(bandwidth: f64) -> Result<ClockInstance> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let horizon = PI / bandwidth;
    let clock = ClockInstance {
        name: format!("rabi(dE={bandwidth})"),
        generator: Generator::Hamiltonian { hamiltonian: Operator::pauli_x().scale(0.5 * bandwidth) },
        initial: DensityMatrix::basis_state(2, 0),
        measurement: ProjectiveMeasurement::computational_basis(2),
        horizon,
        parameter_name: "time t".into(),
        bandwidth: Some(bandwidth),
        target_resolution: Some(horizon),
        fast_path: None,
    };
    clock.validate()?;
    Ok(clock)
}

/// Decay `|1> → |0>` at rate `λ`, read out in the populations. The
/// measurement commutes with every state on the orbit.
pub fn make_relaxation_clock(rate: f64) -> Result<ClockInstance> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidArgument(format!("relaxation rate must be positive, got {rate}")));
    }
    let clock = ClockInstance {
        name: format!("relaxation(rate={rate})"),
        generator: Generator::Relaxation { rate },
        initial: DensityMatrix::basis_state(2, 1),
        measurement: ProjectiveMeasurement::computational_basis(2),
        horizon: 2.0 / rate,
        parameter_name: "time t".into(),
        bandwidth: None,
        target_resolution: None,
        fast_path: None,
    };
    clock.validate()?;
    Ok(clock)
}

/// Spin `k/2` rotated about `z` by angle `α`, generator
/// `L_z = diag(-k/2, …, k/2)`, starting from the uniform superposition of
/// all `L_z` eigenstates. The readout is the arc-sector measurement with the
/// fewest sectors (at least 4) that certifies `Δα_target` on a 2049-point
/// grid; `Δα_target` is rounded up to a grid multiple.
pub fn make_spin_rotation_clock(k: usize, delta_alpha_target: f64) -> Result<ClockInstance> {
    if k < 1 {
        return Err(Error::InvalidArgument("spin clock needs k >= 1".into()));
    }
    let horizon = 2.0 * PI;
    if !(delta_alpha_target > 0.0) || delta_alpha_target > horizon {
        return Err(Error::InvalidArgument(format!(
            "target resolution must lie in (0, 2π], got {delta_alpha_target}"
        )));
    }
    let step = horizon / (CONSTRUCTOR_GRID_POINTS - 1) as f64;
    let target = ((delta_alpha_target / step) - 1e-9).ceil() * step;
    let levels = k + 1;
    let energies: Vec<f64> = (0..levels).map(|j| j as f64 - 0.5 * k as f64).collect();

    for n_sectors in 4..=MAX_SPIN_SECTORS {
        let labels = super::circle::sector_labels(n_sectors);
        let probe = CircleProbe::new(levels, n_sectors, labels)?;
        let trajectory = OutcomeTrajectory::from_probe(&probe, horizon, CONSTRUCTOR_GRID_POINTS)?;
        if time_resolution(&trajectory, target)?.satisfied {
            let mut clock =
                sector_clock(&format!("spin(k={k}, sectors={n_sectors})"), &energies, n_sectors, "angle α")?;
            clock.target_resolution = Some(target);
            return Ok(clock);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no sector count up to {MAX_SPIN_SECTORS} certifies Δα = {delta_alpha_target} for k = {k}"
    )))
}
