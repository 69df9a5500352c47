use nalgebra::DMatrix;

use super::projective::{real_trace_product, OutcomeDistribution, ProjectiveMeasurement};
use crate::error::Result;
use crate::quantum::{trace_norm, von_neumann_entropy, DensityMatrix, Operator, C64};

/// `p_j = tr(P_j ρ)`, clamped to `[0, 1]`.
pub fn outcome_distribution(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<OutcomeDistribution> {
    m.ensure_dim(rho.dim())?;
    let probabilities = m
        .projections()
        .iter()
        .map(|p| real_trace_product(p, rho.operator()).clamp(0.0, 1.0))
        .collect();
    OutcomeDistribution::new(probabilities, m.labels().to_vec())
}

/// Non-selective post-measurement state `Σ_j P_j ρ P_j`.
pub fn lueders_update(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<DensityMatrix> {
    m.ensure_dim(rho.dim())?;
    DensityMatrix::from_computed(dephase(m.projections(), rho.operator()))
}

fn dephase(projections: &[Operator], a: &Operator) -> Operator {
    projections
        .iter()
        .fold(Operator::zeros(a.dim()), |acc, p| &acc + &(&(p * a) * p))
}

/// `S(ρ̃) - S(ρ)` evaluated from both spectra.
pub fn entropy_increase(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<f64> {
    let post = lueders_update(m, rho)?;
    Ok(von_neumann_entropy(&post) - von_neumann_entropy(rho))
}

/// `‖ρ - ρ̃‖₁`.
pub fn disturbance(m: &ProjectiveMeasurement, rho: &DensityMatrix) -> Result<f64> {
    let post = lueders_update(m, rho)?;
    trace_norm(&(rho.operator() - post.operator()).hermitian_part())
}

/// The map `γ ↦ Σ_j P_j γ P_j` as a reusable handle.
#[derive(Clone, Debug)]
pub struct DephasingMap {
    projections: Vec<Operator>,
}

impl DephasingMap {
    pub fn dim(&self) -> usize {
        self.projections[0].dim()
    }

    pub fn apply(&self, gamma: &Operator) -> Result<Operator> {
        self.projections[0].ensure_same_dim(gamma)?;
        Ok(dephase(&self.projections, gamma))
    }

    /// Matrix of the map on column-stacked operators, `Σ_j conj(P_j) ⊗ P_j`.
    pub fn superoperator(&self) -> DMatrix<C64> {
        let n = self.dim();
        let mut s = DMatrix::zeros(n * n, n * n);
        for p in &self.projections {
            let m = p.matrix();
            s += m.map(|z| z.conj()).kronecker(m);
        }
        s
    }
}

pub fn dephasing_map(m: &ProjectiveMeasurement) -> DephasingMap {
    DephasingMap { projections: m.projections().to_vec() }
}
