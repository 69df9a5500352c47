//! Pure-state fast path.
//!
//! For `ρ = |ψ><ψ|` the vectors `P_j ψ` are mutually orthogonal, so in the
//! orthonormal basis `φ_j = P_j ψ / √p_j` of their span
//!
//! ```text
//! ρ = v vᵀ,  ρ̃ = diag(p),  v_j = √p_j.
//! ```
//!
//! Both the entropy gain and the disturbance `‖ρ - ρ̃‖₁` therefore depend on
//! the outcome distribution alone, and are computed in at most `J`
//! dimensions instead of the full Hilbert space.

use nalgebra::{DMatrix, DVector};

use super::projective::ProjectiveMeasurement;
use crate::error::{Error, Result};
use crate::quantum::entropy::shannon_entropy;
use crate::quantum::C64;

/// `p_j = ‖P_j ψ‖²` for a unit vector `ψ`.
pub fn pure_probabilities(m: &ProjectiveMeasurement, psi: &DVector<C64>) -> Result<Vec<f64>> {
    if psi.len() != m.dim() {
        return Err(Error::DimensionMismatch { expected: m.dim(), found: psi.len() });
    }
    Ok(m.projections()
        .iter()
        .map(|p| p.expectation(psi).re.clamp(0.0, 1.0))
        .collect())
}

/// `S(ρ̃) - S(ρ)` for a pure `ρ`: the Shannon entropy of the outcomes.
pub fn pure_entropy_increase(p: &[f64]) -> f64 {
    shannon_entropy(p)
}

/// `‖ρ - ρ̃‖₁` for a pure `ρ` with outcome distribution `p`.
pub fn pure_disturbance(p: &[f64]) -> f64 {
    let support: Vec<f64> = p.iter().copied().filter(|&x| x > 0.0).collect();
    let n = support.len();
    if n < 2 {
        return 0.0;
    }
    let v: Vec<f64> = support.iter().map(|x| x.sqrt()).collect();
    let a = DMatrix::from_fn(n, n, |i, j| {
        let outer = v[i] * v[j];
        if i == j {
            outer - support[i]
        } else {
            outer
        }
    });
    a.symmetric_eigenvalues().iter().map(|x| x.abs()).sum()
}
