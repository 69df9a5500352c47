use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::expm::expm;
use crate::error::{Error, Result};
use crate::measurement::{dephasing_map, ProjectiveMeasurement};
use crate::quantum::{DensityMatrix, Operator, C64};

/// `F(ρ) = -i[H, ρ] + λ(G(ρ) - ρ)` with `G` the Lüders map of `dephasing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SemigroupGenerator {
    pub hamiltonian: Operator,
    pub dephasing: ProjectiveMeasurement,
    /// Dephasing rate λ ≥ 0.
    pub rate: f64,
}

impl SemigroupGenerator {
    pub fn new(hamiltonian: Operator, dephasing: ProjectiveMeasurement, rate: f64) -> Result<Self> {
        hamiltonian.ensure_hermitian()?;
        dephasing.ensure_dim(hamiltonian.dim())?;
        if !(rate >= 0.0) || !rate.is_finite() {
            return Err(Error::InvalidArgument(format!("dephasing rate must be >= 0, got {rate}")));
        }
        Ok(SemigroupGenerator { hamiltonian, dephasing, rate })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Matrix of `F` acting on column-stacked operators (`dim² × dim²`).
    pub fn superoperator(&self) -> DMatrix<C64> {
        let n = self.dim();
        let h = self.hamiltonian.matrix();
        let id = DMatrix::<C64>::identity(n, n);
        let minus_i = C64::new(0.0, -1.0);
        // vec(AXB) = (Bᵀ ⊗ A) vec(X)
        let mut f = id.kronecker(h) * minus_i - h.transpose().kronecker(&id) * minus_i;
        if self.rate > 0.0 {
            let g = dephasing_map(&self.dephasing).superoperator();
            let id2 = DMatrix::<C64>::identity(n * n, n * n);
            f += (g - id2) * C64::new(self.rate, 0.0);
        }
        f
    }

    /// `F(ρ)` applied directly.
    pub fn apply(&self, a: &Operator) -> Result<Operator> {
        a.ensure_same_dim(&self.hamiltonian)?;
        let unitary = self.hamiltonian.commutator(a).scale_complex(C64::new(0.0, -1.0));
        if self.rate == 0.0 {
            return Ok(unitary);
        }
        let dephased = dephasing_map(&self.dephasing).apply(a)?;
        Ok(&unitary + &(&dephased - a).scale(self.rate))
    }
}

/// Precomputed `F` for repeated propagation from arbitrary states.
#[derive(Clone, Debug)]
pub struct SemigroupPropagator {
    dim: usize,
    superoperator: DMatrix<C64>,
}

impl SemigroupPropagator {
    pub fn new(generator: &SemigroupGenerator) -> Self {
        SemigroupPropagator { dim: generator.dim(), superoperator: generator.superoperator() }
    }

    /// `exp(F t)(ρ)` for `t ≥ 0`.
    pub fn propagate(&self, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "semigroup propagation is forward-only, got t = {t}"
            )));
        }
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: rho.dim() });
        }
        if t == 0.0 {
            return Ok(rho.clone());
        }
        let step = expm(&(&self.superoperator * C64::new(t, 0.0)));
        let v = step * rho.operator().vectorize();
        DensityMatrix::from_computed(Operator::from_vectorized(&v, self.dim)?)
    }
}

/// `exp(F t)(ρ)`.
pub fn semigroup_propagate(generator: &SemigroupGenerator, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    SemigroupPropagator::new(generator).propagate(rho, t)
}
