//! Projective measurements, Lüders updates and the entropy they generate.

pub mod apparatus;
pub mod lueders;
pub mod projective;
pub mod pure;

pub use apparatus::{cnot, compose_with_apparatus, CompositeMeasurement};
pub use lueders::{
    dephasing_map, disturbance, entropy_increase, lueders_update, outcome_distribution,
    DephasingMap,
};
pub use projective::{total_variation, OutcomeDistribution, ProjectiveMeasurement};
pub use pure::{pure_disturbance, pure_entropy_increase, pure_probabilities};
