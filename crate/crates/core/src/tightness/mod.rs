//! Searching projective measurements for the cheapest readout that still
//! resolves a clock.

pub mod param;
pub mod search;
pub mod simplex;

pub use param::{hermitian_basis, realize_measurement, MeasurementParametrization, MAX_SEARCH_DIM};
pub use search::{minimize, objective, ObjectiveValue, RestartSummary, SearchConfig, SearchResult, TraceRow};
pub use simplex::{nelder_mead, SimplexOptions, SimplexResult};
