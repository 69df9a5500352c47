//! Numerical tolerances shared across modules.
//!
//! Every validation threshold lives here so that tests and reports refer to
//! one number.

/// Relative Hermiticity tolerance, scaled by `max(1, max|A_ij|)`.
pub const HERMITIAN: f64 = 1e-12;

/// Max-entry deviation of `U†U` from the identity.
pub const UNITARY: f64 = 1e-10;

/// Allowed deviation of a density-matrix trace from 1.
pub const TRACE: f64 = 1e-10;

/// Eigenvalues in `[-PSD_CLAMP, 0)` are clamped to zero.
pub const PSD_CLAMP: f64 = 1e-10;

/// Idempotence, orthogonality and completeness tolerance for projections.
pub const PROJECTION: f64 = 1e-10;

/// Eigenvalues of the second argument of a relative entropy at or below
/// this value are treated as outside its support.
pub const SUPPORT_EIGENVALUE: f64 = 1e-12;

/// Weight of the first argument outside the support of the second above
/// which the relative entropy is infinite.
pub const SUPPORT_WEIGHT: f64 = 1e-10;

/// Spectral reconstruction tolerance, scaled like [`HERMITIAN`].
pub const RECONSTRUCTION: f64 = 1e-10;

/// Relative eigenvalue-merging tolerance for spectral atoms.
pub const EIGENVALUE_MERGE: f64 = 1e-9;

/// Default occupation cutoff for the energy bandwidth.
pub const OCCUPATION: f64 = 1e-12;

/// Stationarity of an apparatus state, `||[gamma, H_hat]||_max`.
pub const STATIONARY: f64 = 1e-9;

/// Slack below which an inequality counts as violated.
pub const VIOLATION: f64 = 1e-8;

/// Slack on the total-variation criterion of a resolution certificate.
pub const RESOLUTION: f64 = 1e-9;

/// Sum-to-one tolerance of outcome distributions.
pub const DISTRIBUTION_SUM: f64 = 1e-9;
