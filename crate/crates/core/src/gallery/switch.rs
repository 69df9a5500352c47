use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::instance::ClockInstance;
use crate::dynamics::{uniform_grid, Generator, SemigroupGenerator};
use crate::error::{Error, Result};
use crate::measurement::ProjectiveMeasurement;
use crate::quantum::{DensityMatrix, Operator};

/// Default horizon in units of `1/ΔE`.
pub const SWITCH_HORIZON_PERIODS: f64 = 10.0 * PI;
pub const SWITCH_GRID_POINTS: usize = 4097;
const CROSSING_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwitchWindow {
    /// First time `p₁ = 1/4`.
    pub t1: f64,
    /// First time after `t1` that `p₁ = 3/4`.
    pub t2: f64,
    pub delta_t: f64,
}

/// A dephased qubit switching from logical 0 to 1.
#[derive(Clone, Debug)]
pub struct BitSwitch {
    pub instance: ClockInstance,
    pub generator: SemigroupGenerator,
    pub bandwidth: f64,
    pub rate: f64,
    /// `t1` alone when `p₁` reaches 1/4 but never 3/4.
    pub first_crossing: Option<f64>,
    pub window: Option<SwitchWindow>,
}

impl BitSwitch {
    pub fn completed(&self) -> bool {
        self.window.is_some()
    }

    /// `t₂ - t₁`, or `+∞` when the switch never completes within the horizon.
    pub fn switching_time(&self) -> f64 {
        self.window.map_or(f64::INFINITY, |w| w.delta_t)
    }
}

/// `H = (ΔE/2)σ_x`, `Z`-basis dephasing at rate `λ`, starting in `|0>`, over
/// `10π/ΔE`.
pub fn make_bit_switch(bandwidth: f64, rate: f64) -> Result<BitSwitch> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {bandwidth}")));
    }
    make_bit_switch_with(bandwidth, rate, SWITCH_HORIZON_PERIODS / bandwidth, SWITCH_GRID_POINTS)
}

pub fn make_bit_switch_with(bandwidth: f64, rate: f64, horizon: f64, grid_points: usize) -> Result<BitSwitch> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {bandwidth}")));
    }
    if grid_points < 3 {
        return Err(Error::InvalidArgument(format!("need >= 3 grid points, got {grid_points}")));
    }
    let z = ProjectiveMeasurement::computational_basis(2);
    let generator = SemigroupGenerator::new(Operator::pauli_x().scale(0.5 * bandwidth), z.clone(), rate)?;
    let instance = ClockInstance {
        name: format!("bit-switch(dE={bandwidth}, rate={rate})"),
        generator: Generator::Semigroup(generator.clone()),
        initial: DensityMatrix::basis_state(2, 0),
        measurement: z,
        horizon,
        parameter_name: "time t".into(),
        bandwidth: Some(bandwidth),
        target_resolution: None,
        fast_path: None,
    };
    instance.validate()?;

    let evolution = instance.evolution()?;
    let p1 = |t: f64| -> Result<f64> { Ok(evolution.state_at(t)?.operator().entry(1, 1).re) };
    let times = uniform_grid(horizon, grid_points);
    let values = times.par_iter().map(|&t| p1(t)).collect::<Result<Vec<f64>>>()?;

    let first_crossing = locate(&times, &values, 0, 0.25, &p1)?;
    let window = match first_crossing {
        Some((t1, start)) => locate(&times, &values, start, 0.75, &p1)?
            .map(|(t2, _)| SwitchWindow { t1, t2, delta_t: t2 - t1 }),
        None => None,
    };
    Ok(BitSwitch { instance, generator, bandwidth, rate, first_crossing: first_crossing.map(|c| c.0), window })
}

/// First upward crossing of `level` at or after grid index `from`, refined
/// by bisection; returns the crossing time and the grid index just after it.
fn locate(
    times: &[f64],
    values: &[f64],
    from: usize,
    level: f64,
    f: &impl Fn(f64) -> Result<f64>,
) -> Result<Option<(f64, usize)>> {
    let Some(i) = (from.max(1)..times.len()).find(|&i| values[i] >= level) else {
        return Ok(None);
    };
    if values[i - 1] >= level {
        return Ok(Some((times[i - 1], i)));
    }
    let (mut lo, mut hi) = (times[i - 1], times[i]);
    while hi - lo > CROSSING_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? >= level {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some((0.5 * (lo + hi), i)))
}
