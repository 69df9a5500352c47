//! Time averages of the measurement entropy over `[0, T]` with a uniform
//! prior on `t`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::probe::OrbitProbe;
use crate::error::{Error, Result};
use crate::gallery::{ClockInstance, ProbePath};

pub const QUADRATURE_REL_TOL: f64 = 1e-6;
/// Changes below this are treated as converged regardless of magnitude, so
/// identically vanishing integrands terminate.
pub const QUADRATURE_ABS_FLOOR: f64 = 1e-14;
pub const MAX_QUADRATURE_INTERVALS: usize = 1 << 15;
pub const MIN_QUADRATURE_POINTS: usize = 9;

/// Result of composite Simpson quadrature with interval doubling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quadrature {
    pub value: f64,
    pub points: usize,
    /// `|I_n - I_{n/2}|` at the last doubling.
    pub last_change: f64,
    pub converged: bool,
}

impl Quadrature {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence(format!(
                "Simpson quadrature still changing by {:.3e} at {} points",
                self.last_change, self.points
            )))
        }
    }
}

fn simpson(values: &[f64], h: f64) -> f64 {
    let n = values.len() - 1;
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (values[0] + values[n] + 4.0 * odd + 2.0 * even)
}

/// `∫_a^b f` by composite Simpson, doubling the number of intervals until
/// the estimate changes by less than `rel_tol` relative (or
/// [`QUADRATURE_ABS_FLOOR`] absolute), up to `max_intervals`. Reuses every
/// earlier sample; new samples are evaluated in parallel.
pub fn simpson_adaptive<F>(f: F, a: f64, b: f64, initial_points: usize, rel_tol: f64, max_intervals: usize) -> Result<Quadrature>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    if initial_points < MIN_QUADRATURE_POINTS {
        return Err(Error::InvalidArgument(format!(
            "need >= {MIN_QUADRATURE_POINTS} quadrature points, got {initial_points}"
        )));
    }
    if !(b > a) {
        return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
    }
    let mut intervals = (initial_points - 1).next_multiple_of(2);
    let at = |i: usize, n: usize| if i == n { b } else { a + (b - a) * i as f64 / n as f64 };
    let mut values = (0..=intervals).into_par_iter().map(|i| f(at(i, intervals))).collect::<Result<Vec<_>>>()?;
    let mut estimate = simpson(&values, (b - a) / intervals as f64);
    let mut change = f64::INFINITY;

    while 2 * intervals <= max_intervals {
        let fine = 2 * intervals;
        let fresh = (0..intervals)
            .into_par_iter()
            .map(|i| f(at(2 * i + 1, fine)))
            .collect::<Result<Vec<_>>>()?;
        let mut merged = Vec::with_capacity(fine + 1);
        for (i, v) in values.iter().enumerate() {
            merged.push(*v);
            if i < intervals {
                merged.push(fresh[i]);
            }
        }
        values = merged;
        intervals = fine;
        let refined = simpson(&values, (b - a) / intervals as f64);
        change = (refined - estimate).abs();
        estimate = refined;
        if change <= rel_tol * refined.abs() || change <= QUADRATURE_ABS_FLOOR {
            return Ok(Quadrature { value: estimate, points: intervals + 1, last_change: change, converged: true });
        }
    }
    Ok(Quadrature { value: estimate, points: intervals + 1, last_change: change, converged: false })
}

/// `ΔS̄ = (1/T) ∫₀ᵀ ΔS(t) dt` along a probe.
pub fn average_entropy_increase_of(probe: &dyn OrbitProbe, horizon: f64, quadrature_points: usize) -> Result<Quadrature> {
    let q = simpson_adaptive(
        |t| probe.entropy_increase(t),
        0.0,
        horizon,
        quadrature_points,
        QUADRATURE_REL_TOL,
        MAX_QUADRATURE_INTERVALS,
    )?;
    Ok(Quadrature { value: q.value / horizon, last_change: q.last_change / horizon, ..q })
}

/// `ΔS̄` for a gallery instance, using its fastest exact evaluation path.
pub fn average_entropy_increase(instance: &ClockInstance, quadrature_points: usize) -> Result<Quadrature> {
    let probe = instance.probe(ProbePath::Auto)?;
    average_entropy_increase_of(probe.as_ref(), instance.horizon, quadrature_points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_exact_on_cubics() {
        let q = simpson_adaptive(|x| Ok(x * x * x - x), 0.0, 2.0, 9, 1e-12, 64).unwrap();
        assert!((q.value - 2.0).abs() < 1e-13);
        assert!(q.converged);
    }

    #[test]
    fn simpson_on_sine() {
        let q = simpson_adaptive(|x: f64| Ok(x.sin()), 0.0, PI, 9, 1e-10, 1 << 15).unwrap();
        assert!((q.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn zero_integrand_converges() {
        let q = simpson_adaptive(|_| Ok(0.0), 0.0, 1.0, 9, 1e-6, 64).unwrap();
        assert!(q.converged && q.value == 0.0);
    }

    #[test]
    fn non_convergence_is_flagged() {
        // oscillation far beyond the resolution of 16 intervals
        let q = simpson_adaptive(|x: f64| Ok((4000.0 * x).sin() + 1.0), 0.0, 1.0, 9, 1e-12, 16).unwrap();
        assert!(!q.converged);
        assert!(matches!(q.require_converged(), Err(Error::NonConvergence(_))));
        assert!(simpson_adaptive(|_| Ok(1.0), 0.0, 1.0, 5, 1e-6, 16).is_err());
    }
}
