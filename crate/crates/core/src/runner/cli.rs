//! Command-line front end: subcommands and flags mapped onto an
//! [`ExperimentConfig`].

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::gallery::CATALOG;
use crate::runner::{execute, exit, Experiment, ExperimentConfig};

/// Entropy audits for finite-bandwidth quantum clocks.
#[derive(Parser)]
#[command(name = "qclock", version)]
pub struct Cli {
    /// JSON experiment config; subcommand options override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for report.json and CSV tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides `rng_seed`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Print the clock gallery and exit.
    #[arg(long)]
    list: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Randomized audit of the single-measurement inequalities.
    Verify(Params),
    /// Averaged and pointwise audit of one gallery clock.
    Clock(Named),
    /// Bit-switch audits across dephasing rates.
    Switch(Params),
    /// Search for the cheapest measurement that still resolves the clock.
    Tightness(Named),
    /// Clock read through a qubit apparatus.
    Theorem2(Params),
}

#[derive(Args)]
struct Params {
    /// `key=value` experiment parameters; values are parsed as JSON when
    /// possible.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

#[derive(Args)]
struct Named {
    /// Gallery constructor (see --list).
    name: Option<String>,
    /// `key=value` constructor parameters.
    #[arg(short = 'p', long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
}

impl Command {
    fn kind(&self) -> &'static str {
        match self {
            Command::Verify(_) => "verify",
            Command::Clock(_) => "clock",
            Command::Switch(_) => "switch",
            Command::Tightness(_) => "tightness",
            Command::Theorem2(_) => "theorem2",
        }
    }
}

fn parse_param(s: &str) -> Result<(String, Value), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("parameter `{s}` is not key=value"))?;
    let value = serde_json::from_str(v).unwrap_or_else(|_| Value::String(v.to_string()));
    Ok((k.trim().to_string(), value))
}

fn object(v: &mut Value) -> &mut Map<String, Value> {
    if !v.is_object() {
        *v = Value::Object(Map::new());
    }
    v.as_object_mut().unwrap()
}

pub fn build_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut doc: Value = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => {
            let kind = cli.command.as_ref().map_or("clock", Command::kind);
            let experiment = Experiment::default_for(kind).expect("every subcommand has defaults");
            serde_json::to_value(ExperimentConfig::new(experiment)).expect("config serializes")
        }
    };

    if let Some(cmd) = &cli.command {
        let experiment = object(&mut doc).entry("experiment").or_insert(Value::Null);
        let current = experiment.get("kind").and_then(Value::as_str).map(String::from);
        if current.as_deref().is_some_and(|k| k != cmd.kind()) {
            return Err(format!(
                "config error at `experiment.kind`: config runs `{}` but the subcommand is `{}`",
                current.unwrap(),
                cmd.kind()
            ));
        }
        let exp = object(experiment);
        exp.insert("kind".into(), Value::String(cmd.kind().into()));
        match cmd {
            Command::Clock(n) | Command::Tightness(n) => {
                let clock = object(exp.entry("clock").or_insert(Value::Null));
                if let Some(name) = &n.name {
                    if clock.get("name").and_then(Value::as_str) != Some(name) {
                        clock.clear();
                    }
                    clock.insert("name".into(), Value::String(name.clone()));
                }
                for p in &n.params {
                    let (k, v) = parse_param(p)?;
                    clock.insert(k, v);
                }
            }
            Command::Verify(p) | Command::Switch(p) | Command::Theorem2(p) => {
                for p in &p.params {
                    let (k, v) = parse_param(p)?;
                    exp.insert(k, v);
                }
            }
        }
    }
    let root = object(&mut doc);
    if let Some(seed) = cli.seed {
        root.insert("rng_seed".into(), seed.into());
    }
    if let Some(out) = &cli.out {
        let outputs = object(root.entry("outputs").or_insert(Value::Null));
        outputs.insert("directory".into(), Value::String(out.display().to_string()));
    }
    ExperimentConfig::from_json(&doc.to_string()).map_err(|e| e.to_string())
}

/// Parses `args` (program name first), runs, prints a summary and returns
/// the exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::INPUT } else { exit::OK };
        }
    };
    if cli.list {
        for (name, params, description) in CATALOG {
            println!("{name:<12} {params:<16} {description}");
        }
        return exit::OK;
    }
    if cli.command.is_none() && cli.config.is_none() {
        eprintln!("nothing to run: give a subcommand or --config (see --help)");
        return exit::INPUT;
    }
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("cannot size the thread pool: {e}");
            return exit::INPUT;
        }
    }
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return exit::INPUT;
        }
    };
    let (code, run, error) = execute(&config);
    if let Some(run) = &run {
        let r = &run.report;
        for report in &r.reports {
            println!("{report}");
        }
        for f in &r.findings {
            println!("finding: {f}");
        }
        if let Some(dir) = &config.outputs.directory {
            let mut files = vec!["report.json".to_string()];
            files.extend(r.tables.iter().cloned());
            println!("wrote {} to {}", files.join(", "), dir.display());
        }
        println!("verdict: {:?} ({:.2} s)", r.verdict, r.wall_clock_seconds);
        if !r.converged {
            println!("quadrature did not converge");
        }
    }
    if let Some(e) = error {
        eprintln!("{e}");
    }
    code
}
