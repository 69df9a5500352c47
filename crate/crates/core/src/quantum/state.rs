use nalgebra::DVector;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use super::operator::{Operator, C64};
use super::spectrum::{hermitian_eig, hermitian_eigenvalues, Spectrum};
use crate::error::{Error, Result};
use crate::tol;

/// Positive unit-trace operator.
///
/// Validated on construction: Hermitian, trace one within [`tol::TRACE`],
/// no eigenvalue below `-`[`tol::PSD_CLAMP`].
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        op.ensure_hermitian()?;
        let tr = op.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let lowest = hermitian_eigenvalues(&op)?[0];
        if lowest < -tol::PSD_CLAMP {
            return Err(Error::InvalidState(format!("negative eigenvalue {lowest:.3e}")));
        }
        Ok(DensityMatrix { op })
    }

    /// Re-validates after replacing `op` by its Hermitian part; used for the
    /// outputs of maps that are Hermiticity-preserving only up to rounding.
    pub fn from_computed(op: Operator) -> Result<Self> {
        Self::new(op.hermitian_part())
    }

    /// `|ψ><ψ|` for a nonzero vector, normalized here.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let n = psi.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidState("pure state from a zero vector".into()));
        }
        Self::new(Operator::projector(psi))
    }

    pub fn basis_state(dim: usize, i: usize) -> Self {
        DensityMatrix { op: Operator::basis_projector(dim, i) }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix { op: Operator::identity(dim).scale(1.0 / dim as f64) }
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(Operator::diagonal(probabilities))
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Spectrum with eigenvalues clamped to `[0, ∞)`.
    pub fn spectrum(&self) -> Spectrum {
        let mut s = hermitian_eig(&self.op).expect("validated Hermitian");
        for x in &mut s.eigenvalues {
            *x = x.max(0.0);
        }
        s
    }

    /// Clamped eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.op)
            .expect("validated Hermitian")
            .into_iter()
            .map(|x| x.max(0.0))
            .collect()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        let m = self.op.matrix();
        m.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - tol::PSD_CLAMP
    }

    /// Unit vector `ψ` with `ρ = |ψ><ψ|` when the state is pure.
    pub fn pure_vector(&self) -> Option<DVector<C64>> {
        if !self.is_pure() {
            return None;
        }
        let s = hermitian_eig(&self.op).ok()?;
        Some(s.eigenvector(s.dim() - 1))
    }

    /// `U ρ U†`.
    pub fn conjugate_by(&self, u: &Operator) -> Result<Self> {
        self.op.ensure_same_dim(u)?;
        Self::from_computed(self.op.conjugate_by(u))
    }

    /// `ρ ⊗ σ`.
    pub fn tensor(&self, other: &DensityMatrix) -> Self {
        DensityMatrix { op: self.op.tensor(&other.op) }
    }

    /// `tr(A ρ)`.
    pub fn expectation(&self, a: &Operator) -> Result<C64> {
        self.op.ensure_same_dim(a)?;
        Ok((a * &self.op).trace())
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let op = Operator::deserialize(deserializer)?;
        DensityMatrix::new(op).map_err(D::Error::custom)
    }
}
