//! Entropy functionals, all in nats.

use super::operator::Operator;
use super::spectrum::hermitian_eig;
use super::state::DensityMatrix;
use crate::error::Result;
use crate::tol;

/// `-x ln x` with the convention `0 ln 0 = 0`.
pub fn entropy_term(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Shannon entropy of a probability vector.
pub fn shannon_entropy(p: &[f64]) -> f64 {
    p.iter().map(|&x| entropy_term(x)).sum()
}

/// Binary entropy `-p ln p - (1-p) ln(1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_term(p) + entropy_term(1.0 - p)
}

/// `S(ρ) = -tr(ρ ln ρ)`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues())
}

/// `K(ρ‖σ) = tr(ρ ln ρ) - tr(ρ ln σ)`, or `+∞` when the support of `ρ` is
/// not contained in that of `σ`.
///
/// Evaluated in the eigenbasis of `σ`: only the block of `V†ρV` on the
/// support of `σ` enters the logarithm.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.operator().ensure_same_dim(sigma.operator())?;
    let s = hermitian_eig(sigma.operator())?;
    let v = s.eigenvectors.matrix();
    let rotated = v.adjoint() * rho.operator().matrix() * v;

    let mut cross = 0.0;
    let mut outside = 0.0;
    for (k, &mu) in s.eigenvalues.iter().enumerate() {
        let weight = rotated[(k, k)].re;
        if mu > tol::SUPPORT_EIGENVALUE {
            cross += weight * mu.ln();
        } else {
            outside += weight;
        }
    }
    if outside > tol::SUPPORT_WEIGHT {
        return Ok(f64::INFINITY);
    }
    Ok(-von_neumann_entropy(rho) - cross)
}

/// `½ ‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    rho.operator().ensure_same_dim(sigma.operator())?;
    let diff: Operator = rho.operator() - sigma.operator();
    Ok(0.5 * super::spectrum::trace_norm(&diff.hermitian_part())?)
}
