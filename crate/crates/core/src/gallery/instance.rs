use serde::{Deserialize, Serialize};

use super::circle::CircleProbe;
use crate::bounds::{DenseProbe, OrbitProbe, PureProbe};
use crate::dynamics::{energy_bandwidth, Evolution, Generator};
use crate::error::{Error, Result};
use crate::measurement::ProjectiveMeasurement;
use crate::quantum::DensityMatrix;
use crate::tol;

/// Closed-form evaluation available for some gallery clocks.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FastPath {
    /// Uniform superposition of `k` equally spaced levels read out in
    /// `n_sectors` equal arcs of the circle.
    Circle { k: usize, n_sectors: usize },
}

/// How a [`ClockInstance`] is evaluated pointwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbePath {
    /// Closed form if available, else state vectors for pure unitary
    /// orbits, else density matrices.
    Auto,
    Dense,
    Fast,
}

/// Everything needed to audit one clock.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockInstance {
    pub name: String,
    pub generator: Generator,
    pub initial: DensityMatrix,
    pub measurement: ProjectiveMeasurement,
    pub horizon: f64,
    /// What the orbit parameter means ("time t", "angle α"); never used in
    /// the numerics.
    pub parameter_name: String,
    /// Declared `ΔE`; `None` when the generator has no Hamiltonian part.
    pub bandwidth: Option<f64>,
    #[serde(default)]
    pub target_resolution: Option<f64>,
    #[serde(default)]
    pub fast_path: Option<FastPath>,
}

impl ClockInstance {
    /// Validates dimensions and the declared bandwidth.
    pub fn validate(&self) -> Result<()> {
        let dim = self.initial.dim();
        self.measurement.ensure_dim(dim)?;
        if let Some(h) = self.generator.hamiltonian() {
            if h.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: h.dim() });
            }
        }
        if !(self.horizon > 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidArgument(format!("horizon must be positive, got {}", self.horizon)));
        }
        if let Some(declared) = self.bandwidth {
            let computed = self.computed_bandwidth(tol::OCCUPATION)?.unwrap_or(f64::NAN);
            if !((declared - computed).abs() <= 1e-9) {
                return Err(Error::InvalidState(format!(
                    "declared bandwidth {declared} differs from computed {computed}"
                )));
            }
        }
        Ok(())
    }

    /// `ΔE` of the initial state under the Hamiltonian part of the generator.
    pub fn computed_bandwidth(&self, occupation_tol: f64) -> Result<Option<f64>> {
        self.generator
            .hamiltonian()
            .map(|h| energy_bandwidth(h, &self.initial, occupation_tol))
            .transpose()
    }

    pub fn evolution(&self) -> Result<Evolution> {
        Evolution::new(&self.generator, &self.initial)
    }

    pub fn probe(&self, path: ProbePath) -> Result<Box<dyn OrbitProbe>> {
        match (path, self.fast_path) {
            (ProbePath::Fast | ProbePath::Auto, Some(FastPath::Circle { k, n_sectors })) => {
                Ok(Box::new(CircleProbe::new(k, n_sectors, self.measurement.labels().to_vec())?))
            }
            (ProbePath::Fast, None) => Err(Error::InvalidArgument(format!("{} has no fast path", self.name))),
            (ProbePath::Auto, None) => match self.evolution()? {
                Evolution::Unitary(orbit) if orbit.is_pure() => {
                    Ok(Box::new(PureProbe::new(orbit, self.measurement.clone())?))
                }
                ev => Ok(Box::new(DenseProbe::new(ev, self.measurement.clone())?)),
            },
            (ProbePath::Dense, _) => Ok(Box::new(DenseProbe::new(self.evolution()?, self.measurement.clone())?)),
        }
    }

    /// Same orbit read out by a different measurement; drops the fast path.
    pub fn with_measurement(&self, measurement: ProjectiveMeasurement) -> Result<Self> {
        measurement.ensure_dim(self.initial.dim())?;
        Ok(ClockInstance { measurement, fast_path: None, ..self.clone() })
    }

    pub fn relabeled(&self, parameter_name: &str) -> Self {
        ClockInstance { parameter_name: parameter_name.into(), ..self.clone() }
    }

    pub fn dim(&self) -> usize {
        self.initial.dim()
    }
}
