use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{ClockRun, ExperimentConfig, Interaction, SwitchSpec, Theorem2Spec, TightnessSpec, VerifySpec};
use super::output::{report_si, Cell, Table};
use crate::bounds::{
    lemma3_bound, pinsker_bound, pointwise_reports, rate_cap_report, switch_audit, theorem1_audit,
    theorem2_audit, BoundReport, Theorem1Audit,
};
use crate::dynamics::{energy_bandwidth, propagate, uniform_grid, Generator};
use crate::error::Result;
use crate::gallery::{make_bit_switch_with, make_rabi_clock, ClockInstance, ProbePath};
use crate::measurement::{cnot, compose_with_apparatus, entropy_increase, lueders_update, ProjectiveMeasurement};
use crate::quantum::{relative_entropy, DensityMatrix, Operator};
use crate::random;
use crate::tightness::minimize;

const IDENTITY_ANCHOR: &str = "entropy-gain-identity";
const IDENTITY_TOL: f64 = 1e-8;
const VERIFY_TIME_SPAN: f64 = 10.0;

/// What an experiment produced, before it is written anywhere.
#[derive(Debug, Default)]
pub struct Outcome {
    pub reports: Vec<BoundReport>,
    pub summary: BTreeMap<String, Value>,
    pub findings: Vec<String>,
    pub tables: Vec<Table>,
    /// Extra JSON documents by file name.
    pub documents: Vec<(String, Value)>,
    pub converged: bool,
}

impl Outcome {
    fn new() -> Self {
        Outcome { converged: true, ..Default::default() }
    }

    fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.insert(key.to_string(), value.into());
    }
}

/// Finite numbers as JSON numbers, everything else as a string.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(super::output::format_number(x))
    }
}

fn opt(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

/// Keeps the worst report of each name and counts checks and violations.
#[derive(Default)]
struct Tally {
    worst: BTreeMap<String, (BoundReport, usize, usize)>,
}

impl Tally {
    fn add(&mut self, r: BoundReport) {
        let violated = r.violated() as usize;
        match self.worst.get_mut(&r.name) {
            Some((w, n, v)) => {
                *n += 1;
                *v += violated;
                if r.slack < w.slack {
                    *w = r;
                }
            }
            None => {
                self.worst.insert(r.name.clone(), (r, 1, violated));
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        for (name, (r, n, v)) in other.worst {
            match self.worst.get_mut(&name) {
                Some(e) => {
                    e.1 += n;
                    e.2 += v;
                    if r.slack < e.0.slack {
                        e.0 = r;
                    }
                }
                None => {
                    self.worst.insert(name, (r, n, v));
                }
            }
        }
        self
    }

    fn finish(self, out: &mut Outcome) {
        for (name, (r, n, v)) in self.worst {
            out.set(&format!("{name}.checks"), n);
            out.set(&format!("{name}.violations"), v);
            out.set(&format!("{name}.worst_slack"), num(r.slack));
            out.reports.push(r.with_note(format!("worst of {n} checks, {v} violated")));
        }
    }
}

fn verify_instance(spec: &VerifySpec, seed: u64, index: usize) -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let dim = rng.gen_range(spec.min_dim..=spec.max_dim);
    let rank = match rng.gen_range(0..3) {
        0 => 1,
        1 => dim,
        _ => rng.gen_range(1..=dim),
    };
    let rho = random::density_matrix(&mut rng, dim, Some(rank));
    let outcomes = rng.gen_range(2..=dim);
    let m = random::projective_measurement(&mut rng, dim, Some(outcomes));
    let h = random::hermitian(&mut rng, dim, 1.0);

    let mut tally = Tally::default();
    let ds = entropy_increase(&m, &rho)?;
    let k = relative_entropy(&rho, &lueders_update(&m, &rho)?)?;
    tally.add(
        BoundReport::within(IDENTITY_ANCHOR, IDENTITY_ANCHOR, "|dS - K(rho || rho~)| <= 1e-8", (ds - k).abs(), IDENTITY_TOL)
            .with_input("dim", dim as f64)
            .with_input("rank", rank as f64)
            .with_input("outcomes", outcomes as f64),
    );
    tally.add(pinsker_bound(&m, &rho)?.with_input("dim", dim as f64));

    let bandwidth = energy_bandwidth(&h, &rho, crate::tol::OCCUPATION)?;
    for _ in 0..spec.times_per_instance {
        let t = rng.gen_range(0.0..VERIFY_TIME_SPAN);
        let rho_t = propagate(&h, &rho, t)?;
        let lemma3 = lemma3_bound(&h, &m, &rho_t, bandwidth)?.with_input("t", t);
        let l1 = lemma3.inputs.get("l1_rate").copied();
        tally.add(lemma3);
        if let Some(l1) = l1 {
            tally.add(rate_cap_report(l1, bandwidth).with_input("t", t));
        }
    }
    Ok(tally)
}

/// Random single-measurement audits.
pub fn verify(spec: &VerifySpec, seed: u64) -> Result<Outcome> {
    let tally = (0..spec.instances)
        .into_par_iter()
        .map(|i| verify_instance(spec, seed, i))
        .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?;
    let mut out = Outcome::new();
    out.set("instances", spec.instances);
    out.set("times_per_instance", spec.times_per_instance);
    tally.finish(&mut out);
    Ok(out)
}

fn audit_summary(out: &mut Outcome, audit: &Theorem1Audit) {
    out.set("instance", audit.instance.clone());
    out.set("parameter", audit.parameter_name.clone());
    out.set("average_entropy_increase", num(audit.average.value));
    out.set("quadrature_points", audit.average.points);
    out.set("quadrature_converged", audit.average.converged);
    out.set("delta_t", opt(audit.certificate.as_ref().map(|c| c.delta_t)));
    out.set("min_total_variation", opt(audit.certificate.as_ref().map(|c| c.min_total_variation)));
    out.set("minimal_resolution", opt(audit.minimal_resolution));
    out.set("bandwidth", opt(audit.bandwidth));
    out.set("theorem1_bound", opt(audit.bound));
    out.converged &= audit.average.converged;
}

fn summary_table(audit: &Theorem1Audit) -> Table {
    let mut t = Table::new(
        "summary.csv",
        ["instance", "average_entropy_increase", "delta_t", "bandwidth", "theorem1_bound", "minimal_resolution", "quadrature_points", "converged"]
            .map(String::from)
            .to_vec(),
    );
    let dt = audit.certificate.as_ref().map_or(f64::NAN, |c| c.delta_t);
    t.push(vec![
        audit.instance.as_str().into(),
        audit.average.value.into(),
        dt.into(),
        audit.bandwidth.unwrap_or(f64::NAN).into(),
        audit.bound.unwrap_or(f64::NAN).into(),
        audit.minimal_resolution.unwrap_or(f64::INFINITY).into(),
        audit.average.points.into(),
        audit.average.converged.into(),
    ]);
    t
}

/// The pointwise chain along a clock orbit, as reports and a table.
fn trajectory(instance: &ClockInstance, bandwidth: Option<f64>, points: usize) -> Result<(Table, Vec<BoundReport>)> {
    let probe = instance.probe(ProbePath::Auto)?;
    let times = uniform_grid(instance.horizon, points);
    let snapshots = times.par_iter().map(|&t| probe.snapshot(t)).collect::<Result<Vec<_>>>()?;

    let mut header = vec!["t".to_string()];
    header.extend(probe.labels().iter().map(|l| format!("p_{l}")));
    header.extend(["S", "dS", "pinsker", "lemma3"].map(String::from));
    let mut table = Table::new("trajectory.csv", header);
    let mut tally = Tally::default();
    for s in &snapshots {
        let mut row: Vec<Cell> = vec![s.t.into()];
        row.extend(s.probabilities.iter().map(|&p| Cell::from(p)));
        row.push(s.entropy.into());
        row.push(s.entropy_increase.into());
        row.push((0.5 * s.disturbance * s.disturbance).into());
        let lemma3 = bandwidth.filter(|&de| de > 0.0).map_or(f64::NAN, |de| 0.5 * (s.l1_rate() / de).powi(2));
        row.push(lemma3.into());
        table.push(row);
        for r in pointwise_reports(s, bandwidth) {
            tally.add(r);
        }
    }
    let mut scratch = Outcome::new();
    tally.finish(&mut scratch);
    Ok((table, scratch.reports))
}

/// Averaged audit of one clock plus the pointwise chain along its orbit.
pub fn clock(run: &ClockRun, config: &ExperimentConfig) -> Result<Outcome> {
    let instance = run.clock.build()?;
    let audit = theorem1_audit(&instance, &config.audit_options())?;
    let mut out = Outcome::new();
    audit_summary(&mut out, &audit);
    out.reports.push(audit.report.clone());

    // Only a Hamiltonian orbit keeps the bandwidth of its initial state.
    let pointwise_bandwidth = match instance.generator {
        Generator::Hamiltonian { .. } => audit.bandwidth,
        _ => None,
    };
    let (table, reports) = trajectory(&instance, pointwise_bandwidth, config.grids.trajectory_points)?;
    if let Generator::Relaxation { .. } = instance.generator {
        let col = table.column("dS").unwrap();
        let max_ds = table.rows.iter().filter_map(|r| r[col].as_number()).fold(0.0, f64::max);
        out.set("max_entropy_increase", num(max_ds));
        out.findings.push(format!(
            "relaxation orbit: max dS over the trajectory is {max_ds:.3e} while the minimal resolution is {}",
            audit.minimal_resolution.map_or("infinite".to_string(), |r| format!("{r:.6}"))
        ));
    }
    out.reports.extend(reports);
    out.tables.push(table);
    out.tables.push(summary_table(&audit));
    out.documents.push(("instance.json".into(), serde_json::to_value(&instance).expect("instance serializes")));
    si_notes(&mut out, config, audit.average.value, audit.certificate.as_ref().map(|c| c.delta_t), audit.bandwidth);
    Ok(out)
}

fn si_notes(out: &mut Outcome, config: &ExperimentConfig, entropy: f64, delta_t: Option<f64>, bandwidth: Option<f64>) {
    if let Some(temp) = config.units.temperature_k {
        if let Ok(q) = report_si(entropy, temp) {
            out.set("heat_joules", num(q));
        }
    }
    if let Some(tau) = config.units.time_unit_s {
        if let Some(dt) = delta_t {
            out.set("delta_t_seconds", num(dt * tau));
        }
        if let Some(de) = bandwidth {
            out.set("bandwidth_joules", num(de * super::output::HBAR / tau));
        }
    }
}

/// Bit switch audits across dephasing rates, with the Zeno trend.
pub fn switch(spec: &SwitchSpec, config: &ExperimentConfig) -> Result<Outcome> {
    let de = spec.bandwidth;
    let horizon = spec.horizon.unwrap_or(crate::gallery::switch::SWITCH_HORIZON_PERIODS / de);
    let mut rates = spec.rates.clone();
    rates.sort_by(f64::total_cmp);
    let switches = rates
        .par_iter()
        .map(|&l| make_bit_switch_with(de, l, horizon, spec.grid_points))
        .collect::<Result<Vec<_>>>()?;

    let mut out = Outcome::new();
    let mut table = Table::new(
        "switch.csv",
        ["rate", "t1", "t2", "delta_t", "entropy_change", "switch_bound", "completed"].map(String::from).to_vec(),
    );
    for s in &switches {
        let report = switch_audit(s)?;
        let (t1, t2, dt) = s.window.map_or((f64::NAN, f64::NAN, f64::INFINITY), |w| (w.t1, w.t2, w.delta_t));
        let (left, right) = if s.completed() { (report.left, report.right) } else { (f64::NAN, f64::NAN) };
        table.push(vec![s.rate.into(), t1.into(), t2.into(), dt.into(), left.into(), right.into(), s.completed().into()]);
        out.reports.push(report);
        if let Some(temp) = config.units.temperature_k.filter(|_| s.completed()) {
            if let Ok(q) = report_si(left, temp) {
                out.set(&format!("heat_joules.rate={}", s.rate), num(q));
            }
        }
    }
    for pair in switches.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.switching_time() < a.switching_time() {
            out.findings.push(format!(
                "switching time decreased from {:.6} at rate {} to {:.6} at rate {}",
                a.switching_time(),
                a.rate,
                b.switching_time(),
                b.rate
            ));
        }
    }
    let stalled: Vec<f64> = switches.iter().filter(|s| !s.completed()).map(|s| s.rate).collect();
    if !stalled.is_empty() {
        out.findings.push(format!("no completed switch within t <= {horizon:.6} for rates {stalled:?}"));
    }
    let monotone = switches.windows(2).all(|p| p[1].switching_time() >= p[0].switching_time());
    out.set("switching_time_nondecreasing", monotone);
    out.set("horizon", num(horizon));
    out.set("bandwidth", num(de));
    out.tables.push(table);
    Ok(out)
}

/// Measurement search with the bound as an oracle on every iterate.
pub fn tightness(spec: &TightnessSpec, config: &ExperimentConfig) -> Result<Outcome> {
    let instance = spec.clock.build()?;
    let mut search = spec.search.clone();
    search.rng_seed = config.rng_seed;
    let result = minimize(&instance, &search)?;

    let mut out = Outcome::new();
    let relation = "avg dS >= 1/(2 (dt dE)^2)";
    let anchor = crate::bounds::theorems::TIME_RESOLUTION_ANCHOR;
    match result.bound {
        Some(bound) if result.feasible => {
            out.reports.push(
                BoundReport::compare("tightness-best", anchor, relation, result.best_average, bound)
                    .with_input("delta_t", result.delta_t)
                    .with_input("bandwidth", result.bandwidth.unwrap_or(f64::NAN)),
            );
        }
        _ => out.reports.push(BoundReport::inapplicable(
            "tightness-best",
            anchor,
            relation,
            "no feasible measurement or no energy bandwidth",
        )),
    }
    if let Some(bound) = result.bound {
        let worst = result.trace.iter().filter(|r| r.feasible).min_by(|a, b| a.average.total_cmp(&b.average));
        if let Some(w) = worst {
            out.reports.push(
                BoundReport::compare("tightness-iterates", anchor, relation, w.average, bound)
                    .with_input("restart", w.restart as f64)
                    .with_input("evaluation", w.evaluation as f64),
            );
        }
    }
    if !result.feasible {
        out.findings.push(format!("no restart found a measurement resolving dt = {}", result.delta_t));
    }

    let mut trace = Table::new(
        "trace.csv",
        ["restart", "evaluation", "iteration", "penalty_weight", "objective", "average_entropy_increase", "min_total_variation", "feasible"]
            .map(String::from)
            .to_vec(),
    );
    for r in &result.trace {
        trace.push(vec![
            r.restart.into(),
            r.evaluation.into(),
            r.iteration.into(),
            r.penalty_weight.into(),
            r.objective.into(),
            r.average.into(),
            r.min_total_variation.into(),
            r.feasible.into(),
        ]);
    }
    out.set("instance", instance.name.clone());
    out.set("seed", result.seed);
    out.set("delta_t", num(result.delta_t));
    out.set("bandwidth", opt(result.bandwidth));
    out.set("best_average_entropy_increase", num(result.best_average));
    out.set("theorem1_bound", opt(result.bound));
    out.set("gap_ratio", opt(result.gap_ratio));
    out.set("feasible", result.feasible);
    out.set("evaluations", result.trace.len());
    out.tables.push(trace);
    out.documents.push((
        "best_measurement.json".into(),
        json!({
            "instance": instance.name,
            "theta": result.best_theta,
            "measurement": result.best_measurement,
            "average_entropy_increase": num(result.best_average),
            "certificate": result.certificate,
            "restarts": result.restarts,
        }),
    ));
    Ok(out)
}

/// Rabi clock read through a qubit apparatus.
pub fn theorem2(spec: &Theorem2Spec, config: &ExperimentConfig) -> Result<Outcome> {
    let clock = make_rabi_clock(spec.clock_bandwidth)?;
    let clock_h = clock.generator.hamiltonian().expect("Rabi clock is Hamiltonian").clone();
    let apparatus_h = Operator::diagonal(&[0.0, spec.apparatus_energy]);
    let gamma = DensityMatrix::basis_state(2, 0);
    let u = match spec.interaction {
        Interaction::Cnot => cnot(),
        Interaction::Identity => Operator::identity(4),
    };
    let pointer = ProjectiveMeasurement::computational_basis(2);
    let composite = compose_with_apparatus(&clock.initial, &gamma, &apparatus_h, &u, &pointer)?;
    let horizon = spec.horizon.unwrap_or(PI / spec.clock_bandwidth);
    let mut options = config.audit_options();
    if options.delta_t.is_none() && options.delta_t_candidates.is_none() {
        options.delta_t = Some(horizon);
    }
    let audit = theorem2_audit(&composite, &clock_h, &apparatus_h, horizon, &options)?;
    let mut out = Outcome::new();
    audit_summary(&mut out, &audit);
    out.set("apparatus_energy", num(spec.apparatus_energy));
    out.reports.push(audit.report.clone());
    if spec.interaction == Interaction::Identity {
        out.findings.push("identity interaction: the pointer carries no clock information".into());
    }
    out.tables.push(summary_table(&audit));
    si_notes(&mut out, config, audit.average.value, audit.certificate.as_ref().map(|c| c.delta_t), audit.bandwidth);
    Ok(out)
}
