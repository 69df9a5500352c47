//! Runs a JSON experiment config in-process and prints the summary.

use qclock::runner::{run, ExperimentConfig};

const CONFIG: &str = r#"{
  "experiment": {"kind": "clock", "clock": {"name": "circle", "k": 8}},
  "grids": {"trajectory_points": 65},
  "units": {"temperature_k": 300.0}
}"#;

fn main() {
    let config = ExperimentConfig::from_json(CONFIG).unwrap_or_else(|e| panic!("{e}"));
    let result = run(&config).expect("run");
    for (k, v) in &result.report.summary {
        println!("{k:<26} {v}");
    }
    println!("exit code {}", result.report.exit_code());
}
