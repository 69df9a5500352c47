//! Averaged entropy bounds for clocks with a certified resolution.

use serde::{Deserialize, Serialize};

use super::average::{average_entropy_increase_of, Quadrature};
use super::probe::{OrbitProbe, Snapshot};
use super::rate::{disturbance_rate_report, pinsker_report, rate_cap_report};
use super::report::BoundReport;
use super::resolution::{min_grid_resolution, min_resolution, time_resolution, OutcomeTrajectory, ResolutionCertificate};
use crate::dynamics::{energy_bandwidth, Generator};
use crate::error::{Error, Result};
use crate::gallery::{BitSwitch, ClockInstance, ProbePath};
use crate::measurement::CompositeMeasurement;
use crate::quantum::{von_neumann_entropy, Operator};
use crate::tol;

pub const TIME_RESOLUTION_ANCHOR: &str = "time-resolution-entropy";
pub const COMPOSITE_ANCHOR: &str = "composite-apparatus";
pub const SWITCH_ANCHOR: &str = "switch-entropy";

/// `½ / (Δt ΔE)²` with `ħ = 1`.
pub fn theorem1_bound(delta_t: f64, bandwidth: f64) -> Result<f64> {
    if !(delta_t > 0.0) || !(bandwidth > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need delta_t > 0 and bandwidth > 0, got {delta_t} and {bandwidth}"
        )));
    }
    Ok(0.5 / (delta_t * bandwidth).powi(2))
}

/// `λ / (2 Δt ΔE²)` with `ħ = 1`: the entropy produced while a dephased
/// switch runs for `Δt`.
pub fn switch_bound(rate: f64, delta_t: f64, bandwidth: f64) -> Result<f64> {
    if !(rate >= 0.0) {
        return Err(Error::InvalidArgument(format!("rate must be >= 0, got {rate}")));
    }
    Ok(rate * delta_t * theorem1_bound(delta_t, bandwidth)?)
}

/// Knobs shared by the averaged audits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AuditOptions {
    /// Points of the uniform resolution grid on `[0, T]`.
    pub grid_points: usize,
    /// Initial Simpson points; doubled until converged.
    pub quadrature_points: usize,
    pub occupation_tol: f64,
    /// Resolution to certify. Without it the smallest certified value in
    /// `delta_t_candidates` is used, then the instance target, then the
    /// smallest certified grid multiple.
    pub delta_t: Option<f64>,
    pub delta_t_candidates: Option<Vec<f64>>,
}

impl Default for AuditOptions {
    fn default() -> Self {
        AuditOptions { grid_points: 2049, quadrature_points: 65, occupation_tol: tol::OCCUPATION, delta_t: None, delta_t_candidates: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Audit {
    pub instance: String,
    pub parameter_name: String,
    pub bandwidth: Option<f64>,
    pub certificate: Option<ResolutionCertificate>,
    /// Smallest certified grid multiple, `+∞` if none (serialized as null).
    pub minimal_resolution: Option<f64>,
    pub average: Quadrature,
    pub bound: Option<f64>,
    pub report: BoundReport,
}

/// `ΔS̄ ≥ ½/(Δt ΔE)²` for a Hamiltonian orbit with certified resolution `Δt`.
pub fn theorem1_audit(instance: &ClockInstance, options: &AuditOptions) -> Result<Theorem1Audit> {
    let probe = instance.probe(ProbePath::Auto)?;
    let bandwidth = match instance.generator {
        Generator::Hamiltonian { .. } => instance.computed_bandwidth(options.occupation_tol)?,
        _ => None,
    };
    averaged_audit(instance, probe.as_ref(), bandwidth, TIME_RESOLUTION_ANCHOR, options)
}

/// Same pipeline with an explicit probe (e.g. forcing the dense path).
pub fn theorem1_audit_with(
    instance: &ClockInstance,
    probe: &dyn OrbitProbe,
    options: &AuditOptions,
) -> Result<Theorem1Audit> {
    let bandwidth = match instance.generator {
        Generator::Hamiltonian { .. } => instance.computed_bandwidth(options.occupation_tol)?,
        _ => None,
    };
    averaged_audit(instance, probe, bandwidth, TIME_RESOLUTION_ANCHOR, options)
}

fn averaged_audit(
    instance: &ClockInstance,
    probe: &dyn OrbitProbe,
    bandwidth: Option<f64>,
    anchor: &str,
    options: &AuditOptions,
) -> Result<Theorem1Audit> {
    let relation = "avg dS >= 1/(2 (dt dE)^2)";
    let horizon = instance.horizon;
    let trajectory = OutcomeTrajectory::from_probe(probe, horizon, options.grid_points)?;
    let minimal = min_grid_resolution(&trajectory);
    let certificate = match (options.delta_t, &options.delta_t_candidates, instance.target_resolution) {
        (Some(dt), _, _) => Some(time_resolution(&trajectory, dt)?),
        (None, Some(candidates), _) => {
            let dt = min_resolution(&trajectory, candidates);
            dt.is_finite().then(|| time_resolution(&trajectory, dt)).transpose()?
        }
        (None, None, Some(dt)) => Some(time_resolution(&trajectory, dt)?),
        (None, None, None) => minimal.clone(),
    };
    let certificate = certificate.map(|c| match bandwidth {
        Some(de) => c.with_bandwidth(de),
        None => c,
    });
    let average = average_entropy_increase_of(probe, horizon, options.quadrature_points)?;

    let mut audit = Theorem1Audit {
        instance: instance.name.clone(),
        parameter_name: instance.parameter_name.clone(),
        bandwidth,
        certificate: certificate.clone(),
        minimal_resolution: minimal.as_ref().map(|c| c.delta_t),
        average,
        bound: None,
        report: BoundReport::inapplicable(anchor, anchor, relation, ""),
    };
    let reason = match (bandwidth, &certificate) {
        (None, _) => Some("the generator has no Hamiltonian orbit with a finite bandwidth".to_string()),
        (Some(de), _) if de <= 0.0 => Some("zero bandwidth: the state is stationary".to_string()),
        (_, None) => Some("no admissible delta_t is a certified resolution".to_string()),
        (_, Some(c)) if !c.satisfied => Some(format!(
            "delta_t = {} is not certified (min TV {:.6})",
            c.delta_t, c.min_total_variation
        )),
        _ => None,
    };
    audit.report = match reason {
        Some(r) => BoundReport::inapplicable(anchor, anchor, relation, r).with_input("average_entropy", average.value),
        None => {
            let (de, c) = (bandwidth.unwrap(), certificate.unwrap());
            let bound = theorem1_bound(c.delta_t, de)?;
            audit.bound = Some(bound);
            BoundReport::compare(anchor, anchor, relation, average.value, bound)
                .with_input("delta_t", c.delta_t)
                .with_input("bandwidth", de)
                .with_input("horizon", horizon)
                .with_input("min_total_variation", c.min_total_variation)
                .with_input("quadrature_points", average.points as f64)
                .with_input("grid_points", options.grid_points as f64)
        }
    };
    if !average.converged {
        audit.report = audit.report.with_note(format!(
            "quadrature not converged: last change {:.3e}",
            average.last_change
        ));
    }
    Ok(audit)
}

/// The averaged bound on clock ⊗ apparatus, with `ΔE` taken from the clock
/// factor alone. The joint orbit is generated by `H ⊗ 1 + 1 ⊗ Ĥ`.
pub fn theorem2_audit(
    composite: &CompositeMeasurement,
    clock_hamiltonian: &Operator,
    apparatus_hamiltonian: &Operator,
    horizon: f64,
    options: &AuditOptions,
) -> Result<Theorem1Audit> {
    if clock_hamiltonian.dim() != composite.clock_dim {
        return Err(Error::DimensionMismatch { expected: composite.clock_dim, found: clock_hamiltonian.dim() });
    }
    if apparatus_hamiltonian.dim() != composite.apparatus_dim {
        return Err(Error::DimensionMismatch { expected: composite.apparatus_dim, found: apparatus_hamiltonian.dim() });
    }
    let clock_part = clock_hamiltonian.tensor(&Operator::identity(composite.apparatus_dim));
    let joint = &clock_part + &Operator::identity(composite.clock_dim).tensor(apparatus_hamiltonian);
    let bandwidth = energy_bandwidth(&clock_part, &composite.state, options.occupation_tol)?;
    let instance = ClockInstance {
        name: format!("composite(clock={}, apparatus={})", composite.clock_dim, composite.apparatus_dim),
        generator: Generator::Hamiltonian { hamiltonian: joint },
        initial: composite.state.clone(),
        measurement: composite.measurement.clone(),
        horizon,
        parameter_name: "time t".into(),
        bandwidth: None,
        target_resolution: None,
        fast_path: None,
    };
    instance.validate()?;
    let probe = instance.probe(ProbePath::Dense)?;
    let mut audit = averaged_audit(&instance, probe.as_ref(), Some(bandwidth), COMPOSITE_ANCHOR, options)?;
    audit.report.relation = "avg dS >= 1/(2 (dt dE_clock)^2)".into();
    Ok(audit)
}

/// `S(ρ_{t₂}) - S(ρ_{t₁}) ≥ λ/(2 Δt ΔE²)` over the switching window.
pub fn switch_audit(switch: &BitSwitch) -> Result<BoundReport> {
    let relation = "S(t2) - S(t1) >= rate / (2 dt dE^2)";
    let Some(w) = switch.window else {
        return Ok(BoundReport::inapplicable(
            SWITCH_ANCHOR,
            SWITCH_ANCHOR,
            relation,
            "the switch does not complete within the horizon",
        )
        .with_input("rate", switch.rate));
    };
    let evolution = switch.instance.evolution()?;
    let left = von_neumann_entropy(&evolution.state_at(w.t2)?) - von_neumann_entropy(&evolution.state_at(w.t1)?);
    let right = switch_bound(switch.rate, w.delta_t, switch.bandwidth)?;
    Ok(BoundReport::compare(SWITCH_ANCHOR, SWITCH_ANCHOR, relation, left, right)
        .with_input("rate", switch.rate)
        .with_input("t1", w.t1)
        .with_input("t2", w.t2)
        .with_input("delta_t", w.delta_t)
        .with_input("bandwidth", switch.bandwidth))
}

/// Pinsker, disturbance-rate and rate-cap checks at one point of an orbit.
pub fn pointwise_reports(snapshot: &Snapshot, bandwidth: Option<f64>) -> Vec<BoundReport> {
    let tag = |r: BoundReport| r.with_input("t", snapshot.t);
    let mut out = vec![tag(pinsker_report(snapshot.entropy_increase, snapshot.disturbance))];
    if let Some(de) = bandwidth.filter(|&de| de > 0.0) {
        let l1 = snapshot.l1_rate();
        out.push(tag(disturbance_rate_report(snapshot.disturbance, l1, de)));
        out.push(tag(rate_cap_report(l1, de)));
    }
    out
}
