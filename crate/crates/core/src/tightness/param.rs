use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::ProjectiveMeasurement;
use crate::quantum::{hermitian_eig, Operator, C64};

/// Largest Hilbert-space dimension the search accepts.
pub const MAX_SEARCH_DIM: usize = 8;

/// `U = exp(iA)` with `A = Σ θ_i B_i` in an orthonormal Hermitian basis,
/// acting on a fixed partition of the standard basis into blocks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementParametrization {
    pub theta: Vec<f64>,
    pub base_partition: Vec<usize>,
}

impl MeasurementParametrization {
    /// `θ = 0` with the given partition.
    pub fn identity(base_partition: Vec<usize>) -> Result<Self> {
        let dim: usize = base_partition.iter().sum();
        let p = MeasurementParametrization { theta: vec![0.0; dim * dim], base_partition };
        p.validate()?;
        Ok(p)
    }

    pub fn dim(&self) -> usize {
        self.base_partition.iter().sum()
    }

    pub fn validate(&self) -> Result<()> {
        let dim = self.dim();
        if dim == 0 || dim > MAX_SEARCH_DIM || self.base_partition.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "base partition {:?} must have positive ranks summing to 1..={MAX_SEARCH_DIM}",
                self.base_partition
            )));
        }
        if self.theta.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: self.theta.len() });
        }
        if self.theta.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("theta has non-finite entries".into()));
        }
        Ok(())
    }

    /// `A = Σ θ_i B_i`.
    pub fn generator(&self) -> Result<Operator> {
        self.validate()?;
        let dim = self.dim();
        let basis = hermitian_basis(dim);
        let mut a = Operator::zeros(dim);
        for (b, &t) in basis.iter().zip(&self.theta) {
            if t != 0.0 {
                a = &a + &b.scale(t);
            }
        }
        Ok(a)
    }

    /// `exp(iA)`, unitary to rounding since it is built from the spectrum of `A`.
    pub fn unitary(&self) -> Result<Operator> {
        let s = hermitian_eig(&self.generator()?)?;
        let u = s.map_complex(|x| C64::new(0.0, x).exp());
        if u.unitarity_deviation() > 1e-9 {
            return Err(Error::NotUnitary { deviation: u.unitarity_deviation() });
        }
        Ok(u)
    }
}

/// Orthonormal (Hilbert–Schmidt) basis of `dim × dim` Hermitian matrices:
/// the diagonal units `E_jj`, then `(E_jk + E_kj)/√2` and
/// `i(E_kj - E_jk)/√2` for `j < k`.
pub fn hermitian_basis(dim: usize) -> Vec<Operator> {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let mut out: Vec<Operator> = (0..dim).map(|j| Operator::basis_projector(dim, j)).collect();
    for j in 0..dim {
        for k in j + 1..dim {
            let mut sym = vec![vec![C64::new(0.0, 0.0); dim]; dim];
            sym[j][k] = C64::new(r, 0.0);
            sym[k][j] = C64::new(r, 0.0);
            let mut asym = vec![vec![C64::new(0.0, 0.0); dim]; dim];
            asym[j][k] = C64::new(0.0, -r);
            asym[k][j] = C64::new(0.0, r);
            out.push(Operator::from_rows(&sym).unwrap());
            out.push(Operator::from_rows(&asym).unwrap());
        }
    }
    out
}

/// `U Π_j U†` for the blocks `Π_j` of the base partition.
pub fn realize_measurement(param: &MeasurementParametrization) -> Result<ProjectiveMeasurement> {
    ProjectiveMeasurement::from_basis(&param.unitary()?, &param.base_partition)
}
