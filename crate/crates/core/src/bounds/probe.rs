//! Pointwise evaluation of measurement quantities along an orbit.

use crate::dynamics::{Evolution, UnitaryOrbit};
use crate::error::{Error, Result};
use crate::measurement::{
    disturbance, entropy_increase, lueders_update, outcome_distribution, pure_disturbance, pure_entropy_increase,
    pure_probabilities, ProjectiveMeasurement,
};
use crate::quantum::von_neumann_entropy;

use super::rate::rates_from_velocity;

/// Everything the audits need at one time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub probabilities: Vec<f64>,
    /// `S(ρ_t)`.
    pub entropy: f64,
    /// `ΔS(t) = S(ρ̃_t) - S(ρ_t)`.
    pub entropy_increase: f64,
    /// `‖ρ_t - ρ̃_t‖₁`.
    pub disturbance: f64,
    /// `ṗ(t)`.
    pub rate: Vec<f64>,
}

impl Snapshot {
    pub fn l1_rate(&self) -> f64 {
        self.rate.iter().map(|x| x.abs()).sum()
    }
}

/// A measured orbit `t ↦ (ρ_t, M)`.
pub trait OrbitProbe: Sync {
    fn labels(&self) -> Vec<String>;
    fn probabilities(&self, t: f64) -> Result<Vec<f64>>;
    fn entropy_increase(&self, t: f64) -> Result<f64>;
    fn snapshot(&self, t: f64) -> Result<Snapshot>;
}

/// Full density-matrix path: Lüders update and von Neumann entropies.
#[derive(Clone, Debug)]
pub struct DenseProbe {
    evolution: Evolution,
    measurement: ProjectiveMeasurement,
}

impl DenseProbe {
    pub fn new(evolution: Evolution, measurement: ProjectiveMeasurement) -> Result<Self> {
        measurement.ensure_dim(evolution.initial().dim())?;
        Ok(DenseProbe { evolution, measurement })
    }
}

impl OrbitProbe for DenseProbe {
    fn labels(&self) -> Vec<String> {
        self.measurement.labels().to_vec()
    }

    fn probabilities(&self, t: f64) -> Result<Vec<f64>> {
        Ok(outcome_distribution(&self.measurement, &self.evolution.state_at(t)?)?.probabilities)
    }

    fn entropy_increase(&self, t: f64) -> Result<f64> {
        entropy_increase(&self.measurement, &self.evolution.state_at(t)?)
    }

    fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let rho = self.evolution.state_at(t)?;
        let updated = lueders_update(&self.measurement, &rho)?;
        let entropy = von_neumann_entropy(&rho);
        let velocity = self.evolution.velocity(&rho)?;
        Ok(Snapshot {
            t,
            probabilities: outcome_distribution(&self.measurement, &rho)?.probabilities,
            entropy,
            entropy_increase: (von_neumann_entropy(&updated) - entropy).max(0.0),
            disturbance: disturbance(&self.measurement, &rho)?,
            rate: rates_from_velocity(&self.measurement, &velocity),
        })
    }
}

/// State-vector path for pure initial states under a Hamiltonian.
#[derive(Clone, Debug)]
pub struct PureProbe {
    orbit: UnitaryOrbit,
    measurement: ProjectiveMeasurement,
}

impl PureProbe {
    pub fn new(orbit: UnitaryOrbit, measurement: ProjectiveMeasurement) -> Result<Self> {
        if !orbit.is_pure() {
            return Err(Error::InvalidState("pure-state probe needs a pure initial state".into()));
        }
        measurement.ensure_dim(orbit.initial().dim())?;
        Ok(PureProbe { orbit, measurement })
    }
}

impl OrbitProbe for PureProbe {
    fn labels(&self) -> Vec<String> {
        self.measurement.labels().to_vec()
    }

    fn probabilities(&self, t: f64) -> Result<Vec<f64>> {
        pure_probabilities(&self.measurement, &self.orbit.vector_at(t).unwrap())
    }

    fn entropy_increase(&self, t: f64) -> Result<f64> {
        Ok(pure_entropy_increase(&self.probabilities(t)?))
    }

    fn snapshot(&self, t: f64) -> Result<Snapshot> {
        let psi = self.orbit.vector_at(t).unwrap();
        let p = pure_probabilities(&self.measurement, &psi)?;
        let h_psi = self.orbit.hamiltonian().apply(&psi);
        // d/dt <ψ|P|ψ> = -2 Im <Hψ|Pψ>
        let rate = self
            .measurement
            .projections()
            .iter()
            .map(|proj| -2.0 * h_psi.dotc(&proj.apply(&psi)).im)
            .collect();
        Ok(Snapshot {
            t,
            entropy: 0.0,
            entropy_increase: pure_entropy_increase(&p),
            disturbance: pure_disturbance(&p),
            probabilities: p,
            rate,
        })
    }
}
