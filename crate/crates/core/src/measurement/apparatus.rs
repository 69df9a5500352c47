//! Reduction of a pre-measurement with a pointer readout to a projective
//! measurement on clock ⊗ apparatus.

use super::projective::ProjectiveMeasurement;
use crate::error::{Error, Result};
use crate::quantum::{DensityMatrix, Operator};
use crate::tol;

/// `ρ ⊗ γ` together with the effective family `P_j = u†(1 ⊗ Q_j)u`.
#[derive(Clone, Debug)]
pub struct CompositeMeasurement {
    pub state: DensityMatrix,
    pub measurement: ProjectiveMeasurement,
    pub clock_dim: usize,
    pub apparatus_dim: usize,
}

/// Builds the composite state and effective measurement for a clock state
/// `rho`, a stationary apparatus state `gamma` (commuting with
/// `apparatus_hamiltonian`), a pre-measurement unitary `u` on the joint
/// space and pointer projections `pointer` on the apparatus.
pub fn compose_with_apparatus(
    rho: &DensityMatrix,
    gamma: &DensityMatrix,
    apparatus_hamiltonian: &Operator,
    u: &Operator,
    pointer: &ProjectiveMeasurement,
) -> Result<CompositeMeasurement> {
    gamma.operator().ensure_same_dim(apparatus_hamiltonian)?;
    apparatus_hamiltonian.ensure_hermitian()?;
    pointer.ensure_dim(gamma.dim())?;
    let commutator_norm = gamma.operator().commutator(apparatus_hamiltonian).max_abs();
    if commutator_norm > tol::STATIONARY {
        return Err(Error::NonStationaryApparatus { commutator_norm });
    }
    let joint = rho.dim() * gamma.dim();
    if u.dim() != joint {
        return Err(Error::DimensionMismatch { expected: joint, found: u.dim() });
    }
    u.ensure_unitary()?;

    let id = Operator::identity(rho.dim());
    let u_dag = u.adjoint();
    let projections = pointer
        .projections()
        .iter()
        .map(|q| (&(&u_dag * &id.tensor(q)) * u).hermitian_part())
        .collect();
    let measurement = ProjectiveMeasurement::new(projections, pointer.labels().to_vec())?;
    Ok(CompositeMeasurement {
        state: rho.tensor(gamma),
        measurement,
        clock_dim: rho.dim(),
        apparatus_dim: gamma.dim(),
    })
}

/// CNOT on clock qubit (control) ⊗ apparatus qubit (target).
pub fn cnot() -> Operator {
    let mut rows = vec![vec![0.0; 4]; 4];
    rows[0][0] = 1.0;
    rows[1][1] = 1.0;
    rows[2][3] = 1.0;
    rows[3][2] = 1.0;
    Operator::from_real_rows(&rows).unwrap()
}
