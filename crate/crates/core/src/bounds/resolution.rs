//! Time resolution: every pair `(t, t + Δt)` on the horizon must be
//! distinguishable with error probability at most 1/4.
//!
//! For two equiprobable hypotheses, the best randomized decision rule
//! `q_j ∈ [0, 1]` attains `max_q Σ_j q_j (p_j(t) - p_j(t+Δt)) = TV(p(t), p(t+Δt))`,
//! so the success probability is `½ + ½ TV` and "error ≤ 1/4" is `TV ≥ 1/2`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probe::OrbitProbe;
use crate::dynamics::uniform_grid;
use crate::error::{Error, Result};
use crate::measurement::total_variation;
use crate::tol;

/// Outcome distributions on a uniform grid covering `[0, T]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutcomeTrajectory {
    pub times: Vec<f64>,
    pub probabilities: Vec<Vec<f64>>,
    pub labels: Vec<String>,
}

impl OutcomeTrajectory {
    pub fn new(times: Vec<f64>, probabilities: Vec<Vec<f64>>, labels: Vec<String>) -> Result<Self> {
        if times.len() < 2 || times.len() != probabilities.len() {
            return Err(Error::InvalidArgument(format!(
                "need >= 2 grid points with one distribution each, got {} times and {} distributions",
                times.len(),
                probabilities.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidArgument("grid must start at t = 0".into()));
        }
        let step = times[1] - times[0];
        for (k, w) in times.windows(2).enumerate() {
            if !(w[1] > w[0]) || ((w[1] - w[0]) - step).abs() > 1e-9 * step.max(1.0) {
                return Err(Error::InvalidArgument(format!("grid is not uniform at index {}", k + 1)));
            }
        }
        Ok(OutcomeTrajectory { times, probabilities, labels })
    }

    /// Samples `probe` on `n_points` uniform points over `[0, horizon]`.
    pub fn from_probe(probe: &dyn OrbitProbe, horizon: f64, n_points: usize) -> Result<Self> {
        if n_points < 2 || !(horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "need horizon > 0 and >= 2 points, got {horizon} and {n_points}"
            )));
        }
        let times = uniform_grid(horizon, n_points);
        let probabilities = times
            .par_iter()
            .map(|&t| probe.probabilities(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(OutcomeTrajectory { times, probabilities, labels: probe.labels() })
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }

    pub fn step(&self) -> f64 {
        self.horizon() / (self.times.len() - 1) as f64
    }

    /// Grid shift corresponding to `delta_t`, if it is a grid multiple in
    /// `(0, T]`.
    pub fn shift_for(&self, delta_t: f64) -> Option<usize> {
        let intervals = self.times.len() - 1;
        let s = (delta_t / self.step()).round();
        if s < 1.0 || s > intervals as f64 {
            return None;
        }
        let snapped = s * self.step();
        ((snapped - delta_t).abs() <= 1e-9 * delta_t.max(1.0)).then_some(s as usize)
    }

    /// All admissible `Δt` on this grid, ascending.
    pub fn candidates(&self) -> Vec<f64> {
        (1..self.times.len()).map(|s| s as f64 * self.step()).collect()
    }

    /// `min_t TV(p(t), p(t + s·h))` and its location.
    fn min_tv_at_shift(&self, shift: usize) -> (f64, f64) {
        let n = self.times.len();
        (0..n - shift)
            .into_par_iter()
            .map(|i| (total_variation(&self.probabilities[i], &self.probabilities[i + shift]), self.times[i]))
            .reduce(|| (f64::INFINITY, f64::NAN), |a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
    }
}

/// Outcome of testing one `Δt`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResolutionCertificate {
    pub delta_t: f64,
    pub horizon: f64,
    pub grid_step: f64,
    pub grid_points: usize,
    pub min_total_variation: f64,
    /// Earliest `t` where the minimum is attained.
    pub argmin_time: f64,
    pub satisfied: bool,
    /// Upper bound on how far TV can dip between grid points, `ΔE·h/2`, when
    /// the bandwidth is known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_slack: Option<f64>,
}

impl ResolutionCertificate {
    pub fn with_bandwidth(mut self, bandwidth: f64) -> Self {
        self.lipschitz_slack = Some(0.5 * bandwidth * self.grid_step);
        self
    }
}

/// Certifies `Δt` on the sampled trajectory; `Δt` must be a grid multiple
/// in `(0, T]`.
pub fn time_resolution(trajectory: &OutcomeTrajectory, delta_t: f64) -> Result<ResolutionCertificate> {
    let horizon = trajectory.horizon();
    if !(delta_t > 0.0) || delta_t > horizon * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!("delta_t must lie in (0, {horizon}], got {delta_t}")));
    }
    let shift = trajectory.shift_for(delta_t).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "delta_t = {delta_t} is not a multiple of the grid step {}",
            trajectory.step()
        ))
    })?;
    let (min_tv, argmin) = trajectory.min_tv_at_shift(shift);
    Ok(ResolutionCertificate {
        delta_t,
        horizon,
        grid_step: trajectory.step(),
        grid_points: trajectory.times.len(),
        min_total_variation: min_tv,
        argmin_time: argmin,
        satisfied: min_tv >= 0.5 - tol::RESOLUTION,
        lipschitz_slack: None,
    })
}

/// Smallest candidate `Δt` whose certificate is satisfied, or `+∞`.
/// Candidates that are not admissible on the grid are skipped.
pub fn min_resolution(trajectory: &OutcomeTrajectory, candidates: &[f64]) -> f64 {
    let mut sorted: Vec<f64> = candidates.iter().copied().filter(|c| c.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    sorted
        .into_iter()
        .find(|&dt| time_resolution(trajectory, dt).map(|c| c.satisfied).unwrap_or(false))
        .unwrap_or(f64::INFINITY)
}

/// Minimal certified `Δt` over all grid multiples.
pub fn min_grid_resolution(trajectory: &OutcomeTrajectory) -> Option<ResolutionCertificate> {
    trajectory
        .candidates()
        .into_iter()
        .map(|dt| time_resolution(trajectory, dt).expect("grid candidates are admissible"))
        .find(|c| c.satisfied)
}
