use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::bounds::AuditOptions;
use crate::error::Result;
use crate::gallery::{
    make_circle_clock, make_rabi_clock, make_relaxation_clock, make_spin_rotation_clock, ClockInstance,
};
use crate::tightness::SearchConfig;
use crate::tol;

/// A complete, self-describing experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub rng_seed: u64,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(default)]
    pub units: Units,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Experiment {
    Verify(VerifySpec),
    Clock(ClockRun),
    Switch(SwitchSpec),
    Tightness(TightnessSpec),
    Theorem2(Theorem2Spec),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::Verify(_) => "verify",
            Experiment::Clock(_) => "clock",
            Experiment::Switch(_) => "switch",
            Experiment::Tightness(_) => "tightness",
            Experiment::Theorem2(_) => "theorem2",
        }
    }

    /// Defaults for a subcommand with no config file.
    pub fn default_for(kind: &str) -> Option<Self> {
        Some(match kind {
            "verify" => Experiment::Verify(VerifySpec::default()),
            "clock" => Experiment::Clock(ClockRun { clock: ClockSpec::Rabi { bandwidth: 1.0 } }),
            "switch" => Experiment::Switch(SwitchSpec::default()),
            "tightness" => Experiment::Tightness(TightnessSpec {
                clock: ClockSpec::Rabi { bandwidth: 1.0 },
                search: SearchConfig::default(),
            }),
            "theorem2" => Experiment::Theorem2(Theorem2Spec::default()),
            _ => return None,
        })
    }
}

/// Randomized audit of the single-measurement inequalities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySpec {
    pub instances: usize,
    pub min_dim: usize,
    pub max_dim: usize,
    pub times_per_instance: usize,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec { instances: 500, min_dim: 2, max_dim: 8, times_per_instance: 10 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClockRun {
    pub clock: ClockSpec,
}

/// A gallery constructor and its parameters, or a dumped instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClockSpec {
    Rabi {
        bandwidth: f64,
    },
    Circle {
        k: usize,
        #[serde(default = "four")]
        n_sectors: usize,
    },
    Relaxation {
        rate: f64,
    },
    Spin {
        k: usize,
        delta_alpha: f64,
    },
    Custom {
        instance: Box<ClockInstance>,
    },
}

fn four() -> usize {
    4
}

impl ClockSpec {
    pub fn build(&self) -> Result<ClockInstance> {
        match self {
            ClockSpec::Rabi { bandwidth } => make_rabi_clock(*bandwidth),
            ClockSpec::Circle { k, n_sectors } => make_circle_clock(*k, *n_sectors),
            ClockSpec::Relaxation { rate } => make_relaxation_clock(*rate),
            ClockSpec::Spin { k, delta_alpha } => make_spin_rotation_clock(*k, *delta_alpha),
            ClockSpec::Custom { instance } => {
                instance.validate()?;
                Ok((**instance).clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SwitchSpec {
    pub bandwidth: f64,
    pub rates: Vec<f64>,
    /// Defaults to `10π/ΔE`.
    pub horizon: Option<f64>,
    pub grid_points: usize,
}

impl Default for SwitchSpec {
    fn default() -> Self {
        SwitchSpec {
            bandwidth: 1.0,
            rates: vec![0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0, 100.0],
            horizon: None,
            grid_points: crate::gallery::switch::SWITCH_GRID_POINTS,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TightnessSpec {
    pub clock: ClockSpec,
    #[serde(default)]
    pub search: SearchConfig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    /// Controlled-NOT from clock qubit to apparatus qubit.
    Cnot,
    /// No interaction: the pointer reads the apparatus alone.
    Identity,
}

/// Rabi clock ⊗ qubit apparatus in a stationary state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Theorem2Spec {
    pub clock_bandwidth: f64,
    /// `Ĥ = apparatus_energy · |1><1|`; the apparatus starts in `|0>`.
    pub apparatus_energy: f64,
    pub interaction: Interaction,
    /// Defaults to `π/ΔE`.
    pub horizon: Option<f64>,
}

impl Default for Theorem2Spec {
    fn default() -> Self {
        Theorem2Spec { clock_bandwidth: 1.0, apparatus_energy: 1.0, interaction: Interaction::Cnot, horizon: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Grids {
    /// Uniform resolution grid on `[0, T]`.
    pub time_points: usize,
    /// Initial Simpson points (doubled until converged).
    pub quadrature_points: usize,
    /// Restrict the resolution search to these `Δt` values.
    pub delta_t_candidates: Option<Vec<f64>>,
    /// Rows of the exported trajectory table.
    pub trajectory_points: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Grids { time_points: 2049, quadrature_points: 65, delta_t_candidates: None, trajectory_points: 257 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Spectral weight below which an energy level counts as unoccupied.
    pub occupation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { occupation: tol::OCCUPATION }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Outputs {
    /// Directory for `report.json` and CSV tables; nothing is written when
    /// absent.
    pub directory: Option<PathBuf>,
}

/// Optional physical units for the report.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Units {
    /// Converts entropies to heat `ΔS k_B T`.
    pub temperature_k: Option<f64>,
    /// Seconds per internal time unit; energies are then `ħ/τ` joules.
    pub time_unit_s: Option<f64>,
}

/// A config problem located by its field path.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error at `{}`: {}", self.path, self.message)
    }
}

impl std::error::Error for ConfigError {}

fn invalid(path: &str, message: impl Into<String>) -> ConfigError {
    ConfigError { path: path.into(), message: message.into() }
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            grids: Grids::default(),
            tolerances: Tolerances::default(),
            rng_seed: 0,
            outputs: Outputs::default(),
            units: Units::default(),
        }
    }

    /// Parses and validates a JSON config.
    pub fn from_json(text: &str) -> std::result::Result<Self, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let coarse = invalid(&path, e.into_inner().to_string());
            if path.starts_with("experiment") {
                serde_json::from_str::<serde_json::Value>(text)
                    .ok()
                    .and_then(|v| refine_experiment_error(v.get("experiment")?))
                    .unwrap_or(coarse)
            } else {
                coarse
            }
        })?;
        config.validate()?;
        Ok(config)
    }

    /// Range checks serde cannot express.
    pub fn validate(&self) -> std::result::Result<(), ConfigError> {
        let g = &self.grids;
        if g.time_points < 3 {
            return Err(invalid("grids.time_points", "must be >= 3"));
        }
        if g.quadrature_points < crate::bounds::average::MIN_QUADRATURE_POINTS {
            return Err(invalid("grids.quadrature_points", "must be >= 9"));
        }
        if g.trajectory_points < 2 {
            return Err(invalid("grids.trajectory_points", "must be >= 2"));
        }
        if let Some(c) = &g.delta_t_candidates {
            if c.is_empty() || c.iter().any(|x| !(*x > 0.0)) {
                return Err(invalid("grids.delta_t_candidates", "must be a nonempty list of positive numbers"));
            }
        }
        if !(self.tolerances.occupation >= 0.0 && self.tolerances.occupation < 1.0) {
            return Err(invalid("tolerances.occupation", "must lie in [0, 1)"));
        }
        if let Some(t) = self.units.temperature_k {
            if !(t > 0.0) {
                return Err(invalid("units.temperature_k", "must be positive"));
            }
        }
        if let Some(t) = self.units.time_unit_s {
            if !(t > 0.0) {
                return Err(invalid("units.time_unit_s", "must be positive"));
            }
        }
        match &self.experiment {
            Experiment::Verify(v) => {
                if v.instances == 0 || v.times_per_instance == 0 {
                    return Err(invalid("experiment.instances", "instances and times_per_instance must be positive"));
                }
                if v.min_dim < 2 || v.max_dim < v.min_dim || v.max_dim > 16 {
                    return Err(invalid("experiment.min_dim", "need 2 <= min_dim <= max_dim <= 16"));
                }
            }
            Experiment::Clock(c) => validate_clock(&c.clock, "experiment.clock")?,
            Experiment::Switch(s) => {
                if !(s.bandwidth > 0.0) {
                    return Err(invalid("experiment.bandwidth", "must be positive"));
                }
                if s.rates.iter().any(|r| !(*r >= 0.0)) {
                    return Err(invalid("experiment.rates", "rates must be >= 0"));
                }
                if s.grid_points < 3 {
                    return Err(invalid("experiment.grid_points", "must be >= 3"));
                }
            }
            Experiment::Tightness(t) => {
                validate_clock(&t.clock, "experiment.clock")?;
                t.search.validate().map_err(|e| invalid("experiment.search", e.to_string()))?;
            }
            Experiment::Theorem2(t) => {
                if !(t.clock_bandwidth > 0.0) {
                    return Err(invalid("experiment.clock_bandwidth", "must be positive"));
                }
                if !t.apparatus_energy.is_finite() {
                    return Err(invalid("experiment.apparatus_energy", "must be finite"));
                }
            }
        }
        Ok(())
    }

    pub fn audit_options(&self) -> AuditOptions {
        AuditOptions {
            grid_points: self.grids.time_points,
            quadrature_points: self.grids.quadrature_points,
            occupation_tol: self.tolerances.occupation,
            delta_t: None,
            delta_t_candidates: self.grids.delta_t_candidates.clone(),
        }
    }
}

fn at<T: serde::de::DeserializeOwned>(prefix: &str, v: serde_json::Value) -> Option<ConfigError> {
    serde_path_to_error::deserialize::<_, T>(v).err().map(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        invalid(&path, e.into_inner().to_string())
    })
}

fn without(v: &serde_json::Value, key: &str) -> serde_json::Value {
    let mut v = v.clone();
    if let Some(o) = v.as_object_mut() {
        o.remove(key);
    }
    v
}

/// Internally tagged enums hide the failing field from the path tracker;
/// re-parse the tagged objects variant by variant to recover it.
fn refine_experiment_error(exp: &serde_json::Value) -> Option<ConfigError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct ClockOnly {
        clock: serde_json::Value,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct TightnessShape {
        clock: serde_json::Value,
        #[serde(default)]
        search: SearchConfig,
    }
    let kind = exp.get("kind")?.as_str()?;
    let body = without(exp, "kind");
    let p = "experiment";
    let clock = match kind {
        "verify" => return at::<VerifySpec>(p, body),
        "switch" => return at::<SwitchSpec>(p, body),
        "theorem2" => return at::<Theorem2Spec>(p, body),
        "clock" => {
            if let Some(e) = at::<ClockOnly>(p, body.clone()) {
                return Some(e);
            }
            body.get("clock")?.clone()
        }
        "tightness" => {
            if let Some(e) = at::<TightnessShape>(p, body.clone()) {
                return Some(e);
            }
            body.get("clock")?.clone()
        }
        _ => return None,
    };
    refine_clock_error(&clock)
}

fn refine_clock_error(clock: &serde_json::Value) -> Option<ConfigError> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Rabi {
        bandwidth: f64,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Circle {
        k: usize,
        n_sectors: Option<usize>,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Relaxation {
        rate: f64,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Spin {
        k: usize,
        delta_alpha: f64,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Custom {
        instance: ClockInstance,
    }
    let p = "experiment.clock";
    let body = without(clock, "name");
    match clock.get("name")?.as_str()? {
        "rabi" => at::<Rabi>(p, body),
        "circle" => at::<Circle>(p, body),
        "relaxation" => at::<Relaxation>(p, body),
        "spin" => at::<Spin>(p, body),
        "custom" => at::<Custom>(p, body),
        other => Some(invalid(&format!("{p}.name"), format!("unknown clock `{other}`"))),
    }
}

fn validate_clock(spec: &ClockSpec, path: &str) -> std::result::Result<(), ConfigError> {
    let bad = |field: &str, msg: &str| Err(invalid(&format!("{path}.{field}"), msg));
    match spec {
        ClockSpec::Rabi { bandwidth } if !(*bandwidth > 0.0) => bad("bandwidth", "must be positive"),
        ClockSpec::Circle { k, .. } if *k < 2 => bad("k", "must be >= 2"),
        ClockSpec::Circle { n_sectors, .. } if *n_sectors < 2 => bad("n_sectors", "must be >= 2"),
        ClockSpec::Relaxation { rate } if !(*rate > 0.0) => bad("rate", "must be positive"),
        ClockSpec::Spin { k, .. } if *k < 1 => bad("k", "must be >= 1"),
        ClockSpec::Spin { delta_alpha, .. } if !(*delta_alpha > 0.0 && *delta_alpha <= 2.0 * PI) => {
            bad("delta_alpha", "must lie in (0, 2π]")
        }
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_materializes_defaults() {
        let c = ExperimentConfig::from_json(r#"{"experiment": {"kind": "clock", "clock": {"name": "circle", "k": 16}}}"#)
            .unwrap();
        assert_eq!(c.grids, Grids::default());
        assert_eq!(c.experiment, Experiment::Clock(ClockRun { clock: ClockSpec::Circle { k: 16, n_sectors: 4 } }));
        let echoed = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&echoed).unwrap(), c);
        assert!(echoed.contains("\"quadrature_points\":65"));
    }

    #[test]
    fn unknown_fields_report_their_path() {
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "verify"}, "grids": {"time_pts": 3}}"#)
            .unwrap_err();
        assert!(e.path.starts_with("grids"), "{e}");
        assert!(e.message.contains("time_pts"));
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "nope"}}"#).unwrap_err();
        assert!(e.path.starts_with("experiment"), "{e}");
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "verify", "instanses": 3}}"#).unwrap_err();
        assert!(e.message.contains("instanses"), "{e}");
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "clock", "clock": {"name": "circle", "k": "x"}}}"#)
            .unwrap_err();
        assert_eq!(e.path, "experiment.clock.k");
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "switch", "rates": [1, "a"]}}"#).unwrap_err();
        assert_eq!(e.path, "experiment.rates[1]");
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "clock", "clock": {"name": "sundial"}}}"#)
            .unwrap_err();
        assert_eq!(e.path, "experiment.clock.name");
    }

    #[test]
    fn range_errors() {
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "clock", "clock": {"name": "circle", "k": 1}}}"#)
            .unwrap_err();
        assert_eq!(e.path, "experiment.clock.k");
        let e = ExperimentConfig::from_json(r#"{"experiment": {"kind": "verify"}, "grids": {"quadrature_points": 3}}"#)
            .unwrap_err();
        assert_eq!(e.path, "grids.quadrature_points");
    }
}
