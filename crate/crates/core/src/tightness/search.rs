use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::param::{realize_measurement, MeasurementParametrization, MAX_SEARCH_DIM};
use super::simplex::{nelder_mead, SimplexOptions};
use crate::bounds::{
    average_entropy_increase_of, theorem1_bound, time_resolution, OutcomeTrajectory, ResolutionCertificate,
};
use crate::error::{Error, Result};
use crate::gallery::{ClockInstance, ProbePath};
use crate::measurement::ProjectiveMeasurement;
use crate::tol;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SearchConfig {
    pub restarts: usize,
    pub simplex: SimplexOptions,
    /// Weight of the hinge `max(0, ½ - min TV)²`.
    pub penalty_weight: f64,
    /// How many times the weight is doubled when a restart ends infeasible.
    pub penalty_escalations: usize,
    pub rng_seed: u64,
    /// Resolution the measurement must certify; defaults to the instance
    /// target.
    pub delta_t: Option<f64>,
    /// Rank sizes of the searched projections; default all rank 1.
    pub base_partition: Option<Vec<usize>>,
    pub grid_points: usize,
    pub quadrature_points: usize,
    /// Restarts after the first start uniformly in `[-s, s]` per coordinate.
    pub start_spread: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 8,
            simplex: SimplexOptions::default(),
            penalty_weight: 1e3,
            penalty_escalations: 2,
            rng_seed: 0,
            delta_t: None,
            base_partition: None,
            grid_points: 513,
            quadrature_points: 33,
            start_spread: std::f64::consts::PI,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.grid_points < 2 || !(self.penalty_weight >= 0.0) || !(self.start_spread >= 0.0) {
            return Err(Error::InvalidArgument(
                "restarts and grid_points must be positive, penalty_weight and start_spread nonnegative".into(),
            ));
        }
        Ok(())
    }
}

/// One evaluation of the penalized objective.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveValue {
    pub value: f64,
    /// `ΔS̄` of the measurement.
    pub average: f64,
    pub min_total_variation: f64,
    pub feasible: bool,
    pub quadrature_converged: bool,
}

fn target_delta_t(instance: &ClockInstance, config: &SearchConfig) -> Result<f64> {
    config.delta_t.or(instance.target_resolution).ok_or_else(|| {
        Error::InvalidArgument(format!("no target resolution for {} and none configured", instance.name))
    })
}

fn evaluate(
    instance: &ClockInstance,
    measurement: ProjectiveMeasurement,
    delta_t: f64,
    weight: f64,
    config: &SearchConfig,
) -> Result<(ObjectiveValue, ResolutionCertificate)> {
    let clock = instance.with_measurement(measurement)?;
    let probe = clock.probe(ProbePath::Auto)?;
    let trajectory = OutcomeTrajectory::from_probe(probe.as_ref(), clock.horizon, config.grid_points)?;
    let certificate = time_resolution(&trajectory, delta_t)?;
    let average = average_entropy_increase_of(probe.as_ref(), clock.horizon, config.quadrature_points)?;
    let hinge = (0.5 - certificate.min_total_variation).max(0.0);
    let value = ObjectiveValue {
        value: average.value + weight * hinge * hinge,
        average: average.value,
        min_total_variation: certificate.min_total_variation,
        feasible: certificate.satisfied,
        quadrature_converged: average.converged,
    };
    Ok((value, certificate))
}

/// `ΔS̄ + w · max(0, ½ - min TV(Δt))²`.
pub fn objective(instance: &ClockInstance, param: &MeasurementParametrization, config: &SearchConfig) -> Result<ObjectiveValue> {
    let delta_t = target_delta_t(instance, config)?;
    Ok(evaluate(instance, realize_measurement(param)?, delta_t, config.penalty_weight, config)?.0)
}

/// One row of the iterate log.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub restart: usize,
    pub evaluation: usize,
    pub iteration: usize,
    pub penalty_weight: f64,
    pub objective: f64,
    pub average: f64,
    pub min_total_variation: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub restart: usize,
    pub start: Vec<f64>,
    pub best_theta: Vec<f64>,
    pub best_average: f64,
    pub feasible: bool,
    pub evaluations: usize,
    pub escalations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub instance: String,
    pub seed: u64,
    pub delta_t: f64,
    pub bandwidth: Option<f64>,
    pub best_theta: Vec<f64>,
    pub best_measurement: ProjectiveMeasurement,
    pub best_average: f64,
    /// Whether any evaluated point certified `Δt`.
    pub feasible: bool,
    pub certificate: ResolutionCertificate,
    pub bound: Option<f64>,
    /// `best_average / bound` for feasible results.
    pub gap_ratio: Option<f64>,
    pub restarts: Vec<RestartSummary>,
    pub trace: Vec<TraceRow>,
}

impl SearchResult {
    /// Feasible trace rows whose `ΔS̄` falls below the bound by more than
    /// the violation tolerance.
    pub fn bound_violations(&self) -> Vec<TraceRow> {
        match self.bound {
            Some(b) => self
                .trace
                .iter()
                .filter(|r| r.feasible && r.average < b - tol::VIOLATION)
                .copied()
                .collect(),
            None => Vec::new(),
        }
    }
}

struct Candidate {
    theta: Vec<f64>,
    value: ObjectiveValue,
    base_objective: f64,
}

fn better(a: &Candidate, b: &Candidate) -> bool {
    match (a.value.feasible, b.value.feasible) {
        (true, false) => true,
        (false, true) => false,
        (true, true) => a.value.average < b.value.average,
        (false, false) => a.base_objective < b.base_objective,
    }
}

struct RestartOutcome {
    summary: RestartSummary,
    best: Candidate,
    trace: Vec<TraceRow>,
}

fn run_restart(
    instance: &ClockInstance,
    config: &SearchConfig,
    partition: &[usize],
    delta_t: f64,
    restart: usize,
) -> Result<RestartOutcome> {
    let n = partition.iter().sum::<usize>().pow(2);
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(restart as u64);
    let start: Vec<f64> = if restart == 0 {
        vec![0.0; n]
    } else {
        (0..n).map(|_| rng.gen_range(-config.start_spread..=config.start_spread)).collect()
    };

    let mut trace = Vec::new();
    let mut best: Option<Candidate> = None;
    let mut x = start.clone();
    let mut weight = config.penalty_weight;
    let mut escalations = 0;
    loop {
        let result = nelder_mead(
            |theta, iteration| {
                let param = MeasurementParametrization { theta: theta.to_vec(), base_partition: partition.to_vec() };
                let (value, _) = evaluate(instance, realize_measurement(&param)?, delta_t, weight, config)?;
                trace.push(TraceRow {
                    restart,
                    evaluation: trace.len(),
                    iteration,
                    penalty_weight: weight,
                    objective: value.value,
                    average: value.average,
                    min_total_variation: value.min_total_variation,
                    feasible: value.feasible,
                });
                let hinge = (0.5 - value.min_total_variation).max(0.0);
                let candidate = Candidate {
                    theta: theta.to_vec(),
                    value,
                    base_objective: value.average + config.penalty_weight * hinge * hinge,
                };
                if best.as_ref().map_or(true, |b| better(&candidate, b)) {
                    best = Some(candidate);
                }
                Ok(value.value)
            },
            &x,
            &config.simplex,
        )?;
        let feasible_found = best.as_ref().is_some_and(|b| b.value.feasible);
        if feasible_found || escalations >= config.penalty_escalations || config.penalty_weight == 0.0 {
            break;
        }
        escalations += 1;
        weight *= 2.0;
        x = result.x;
    }
    let best = best.expect("the simplex evaluates at least one point");
    Ok(RestartOutcome {
        summary: RestartSummary {
            restart,
            start,
            best_theta: best.theta.clone(),
            best_average: best.value.average,
            feasible: best.value.feasible,
            evaluations: trace.len(),
            escalations,
        },
        best,
        trace,
    })
}

/// Simplex search over projective measurements for the smallest `ΔS̄` that
/// still certifies the target resolution. Restarts run in parallel with
/// independent seeded streams; restart 0 starts at `θ = 0`.
pub fn minimize(instance: &ClockInstance, config: &SearchConfig) -> Result<SearchResult> {
    config.validate()?;
    let dim = instance.dim();
    if dim > MAX_SEARCH_DIM {
        return Err(Error::InvalidArgument(format!("search dimension {dim} exceeds {MAX_SEARCH_DIM}")));
    }
    let partition = config.base_partition.clone().unwrap_or_else(|| vec![1; dim]);
    MeasurementParametrization::identity(partition.clone())?;
    if partition.iter().sum::<usize>() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: partition.iter().sum() });
    }
    let delta_t = target_delta_t(instance, config)?;
    let bandwidth = instance.computed_bandwidth(tol::OCCUPATION)?.filter(|&de| de > 0.0);
    let bound = bandwidth.map(|de| theorem1_bound(delta_t, de)).transpose()?;

    let outcomes = (0..config.restarts)
        .into_par_iter()
        .map(|r| run_restart(instance, config, &partition, delta_t, r))
        .collect::<Result<Vec<_>>>()?;

    let mut winner = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        if better(&o.best, &outcomes[winner].best) {
            winner = i;
        }
    }
    let best = &outcomes[winner].best;
    let best_param = MeasurementParametrization { theta: best.theta.clone(), base_partition: partition.clone() };
    let best_measurement = realize_measurement(&best_param)?;
    let (_, certificate) = evaluate(instance, best_measurement.clone(), delta_t, config.penalty_weight, config)?;
    let feasible = best.value.feasible;
    let gap_ratio = bound.filter(|_| feasible).map(|b| best.value.average / b);

    Ok(SearchResult {
        instance: instance.name.clone(),
        seed: config.rng_seed,
        delta_t,
        bandwidth,
        best_theta: best.theta.clone(),
        best_measurement,
        best_average: best.value.average,
        feasible,
        certificate,
        bound,
        gap_ratio,
        restarts: outcomes.iter().map(|o| o.summary.clone()).collect(),
        trace: outcomes.into_iter().flat_map(|o| o.trace).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{make_rabi_clock, make_relaxation_clock};
    use std::f64::consts::PI;

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 2,
            simplex: SimplexOptions { max_iterations: 30, ..Default::default() },
            grid_points: 129,
            ..Default::default()
        }
    }

    #[test]
    fn gallery_measurement_objective_is_its_average() {
        let clock = make_rabi_clock(1.0).unwrap();
        let v = objective(&clock, &MeasurementParametrization::identity(vec![1, 1]).unwrap(), &quick()).unwrap();
        assert!(v.feasible);
        assert_eq!(v.value, v.average);
        assert!((v.average - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-6);
    }

    #[test]
    fn static_measurement_is_penalized() {
        // A = (π/2)(1 - (X+Z)/√2) gives the Hadamard up to phase, turning Z
        // into X, which commutes with H: the outcomes are frozen.
        let clock = make_rabi_clock(1.0).unwrap();
        let (c, r) = (PI / 2.0, std::f64::consts::FRAC_1_SQRT_2);
        let hadamard_generator = vec![c * (1.0 - r), c * (1.0 + r), -c, 0.0];
        let p = MeasurementParametrization { theta: hadamard_generator, base_partition: vec![1, 1] };
        let m = realize_measurement(&p).unwrap();
        assert!(m.max_commutator(clock.generator.hamiltonian().unwrap()) < 1e-12);
        let v = objective(&clock, &p, &quick()).unwrap();
        assert!(!v.feasible);
        assert!(v.value - v.average > 100.0 * v.average.max(1e-3));
    }

    #[test]
    fn search_respects_bound_and_is_reproducible() {
        let clock = make_rabi_clock(1.0).unwrap();
        let a = minimize(&clock, &quick()).unwrap();
        let b = minimize(&clock, &quick()).unwrap();
        assert_eq!(a, b);
        assert!(a.feasible);
        assert!(a.bound_violations().is_empty());
        assert!(a.gap_ratio.unwrap() >= 1.0 - 1e-8);
    }

    #[test]
    fn unconstrained_relaxation_reaches_zero() {
        let clock = make_relaxation_clock(1.0).unwrap();
        let config = SearchConfig { penalty_weight: 0.0, delta_t: Some(1.546875), ..quick() };
        let r = minimize(&clock, &config).unwrap();
        assert!(r.best_average <= 1e-12);
        assert!(r.feasible);
    }
}
