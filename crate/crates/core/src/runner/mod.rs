//! Config-driven experiments with JSON reports and CSV tables.

pub mod cli;
pub mod config;
pub mod experiments;
pub mod output;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

use crate::bounds::{BoundReport, Verdict};
use crate::error::{Error, Result};

pub use config::{
    ClockRun, ClockSpec, ConfigError, Experiment, ExperimentConfig, Grids, Interaction, Outputs, SwitchSpec,
    Theorem2Spec, TightnessSpec, Tolerances, Units, VerifySpec,
};
pub use experiments::Outcome;
pub use output::{format_number, report_si, Cell, Table, BOLTZMANN, HBAR};

pub const TOOL: &str = "qclock";

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const VIOLATION: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const NON_CONVERGENCE: i32 = 3;
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: ExperimentConfig,
    pub reports: Vec<BoundReport>,
    pub summary: BTreeMap<String, Value>,
    pub findings: Vec<String>,
    /// File names of the tables and documents written next to the report.
    pub tables: Vec<String>,
    pub converged: bool,
    pub wall_clock_seconds: f64,
    /// `violated` iff some report is violated, `holds` otherwise.
    pub verdict: Verdict,
}

impl RunReport {
    pub fn violations(&self) -> impl Iterator<Item = &BoundReport> {
        self.reports.iter().filter(|r| r.violated())
    }

    pub fn report(&self, name: &str) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    pub fn exit_code(&self) -> i32 {
        if self.verdict == Verdict::Violated {
            exit::VIOLATION
        } else if !self.converged {
            exit::NON_CONVERGENCE
        } else {
            exit::OK
        }
    }
}

/// A finished run with its tables still in memory.
#[derive(Debug)]
pub struct Run {
    pub report: RunReport,
    pub tables: Vec<Table>,
    pub documents: Vec<(String, Value)>,
}

impl Run {
    pub fn table(&self, file_name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.file_name == file_name)
    }

    /// Writes `report.json`, the CSV tables and any JSON documents.
    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        for t in &self.tables {
            t.write(dir)?;
        }
        for (name, doc) in &self.documents {
            fs::write(dir.join(name), serde_json::to_string_pretty(doc)? + "\n")?;
        }
        fs::write(dir.join("report.json"), serde_json::to_string_pretty(&self.report)? + "\n")
    }
}

/// Dispatches to the configured experiment. Nothing is written.
pub fn run(config: &ExperimentConfig) -> Result<Run> {
    config.validate().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let start = Instant::now();
    let outcome = match &config.experiment {
        Experiment::Verify(spec) => experiments::verify(spec, config.rng_seed)?,
        Experiment::Clock(spec) => experiments::clock(spec, config)?,
        Experiment::Switch(spec) => experiments::switch(spec, config)?,
        Experiment::Tightness(spec) => experiments::tightness(spec, config)?,
        Experiment::Theorem2(spec) => experiments::theorem2(spec, config)?,
    };
    let verdict = if outcome.reports.iter().any(|r| r.violated()) { Verdict::Violated } else { Verdict::Holds };
    let mut names: Vec<String> = outcome.tables.iter().map(|t| t.file_name.clone()).collect();
    names.extend(outcome.documents.iter().map(|(n, _)| n.clone()));
    let report = RunReport {
        tool: TOOL.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        reports: outcome.reports,
        summary: outcome.summary,
        findings: outcome.findings,
        tables: names,
        converged: outcome.converged,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        verdict,
    };
    Ok(Run { report, tables: outcome.tables, documents: outcome.documents })
}

/// Runs and writes to the configured output directory, if any; returns the
/// exit status.
pub fn execute(config: &ExperimentConfig) -> (i32, Option<Run>, Option<String>) {
    match run(config) {
        Ok(r) => {
            if let Some(dir) = &config.outputs.directory {
                if let Err(e) = r.write(dir) {
                    return (exit::INPUT, Some(r), Some(format!("cannot write outputs to {}: {e}", dir.display())));
                }
            }
            (r.report.exit_code(), Some(r), None)
        }
        Err(e) => (error_code(&e), None, Some(e.to_string())),
    }
}

pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::NonConvergence(_) => exit::NON_CONVERGENCE,
        _ => exit::INPUT,
    }
}
