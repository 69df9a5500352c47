//! Every inequality of the theory as an evaluated [`BoundReport`], plus the
//! time-resolution certificate and time averages they rest on.

pub mod average;
pub mod probe;
pub mod rate;
pub mod report;
pub mod resolution;
pub mod theorems;

pub use average::{average_entropy_increase, average_entropy_increase_of, simpson_adaptive, Quadrature};
pub use probe::{DenseProbe, OrbitProbe, PureProbe, Snapshot};
pub use rate::{l1_rate, lemma3_bound, outcome_rate, pinsker_bound, rate_cap_report, rates_from_velocity};
pub use report::{BoundReport, Verdict};
pub use resolution::{min_grid_resolution, min_resolution, time_resolution, OutcomeTrajectory, ResolutionCertificate};
pub use theorems::{
    pointwise_reports, switch_audit, switch_bound, theorem1_audit, theorem1_audit_with, theorem1_bound,
    theorem2_audit, AuditOptions, Theorem1Audit,
};
