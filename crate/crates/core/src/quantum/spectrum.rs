use nalgebra::{DMatrix, DVector};

use super::operator::{Operator, C64};
use crate::error::{Error, Result};

/// Eigendecomposition `A = V diag(λ) V†` of a Hermitian operator.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: Operator,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> DVector<C64> {
        self.eigenvectors.matrix().column(k).into_owned()
    }

    /// `V diag(values) V†`.
    fn compose(&self, values: impl Iterator<Item = C64>) -> Operator {
        let v = self.eigenvectors.matrix();
        let mut scaled = v.clone();
        for (mut col, fk) in scaled.column_iter_mut().zip(values) {
            col *= fk;
        }
        Operator::from_matrix(scaled * v.adjoint()).expect("square by construction")
    }

    /// `V diag(f(λ)) V†` for a complex-valued `f`.
    pub fn map_complex(&self, f: impl Fn(f64) -> C64) -> Operator {
        self.compose(self.eigenvalues.iter().map(|&x| f(x)))
    }

    /// `V diag(f(λ)) V†`; fails if `f` is not finite at some eigenvalue.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Operator> {
        let values: Vec<f64> = self.eigenvalues.iter().map(|&x| f(x)).collect();
        if let Some(k) = values.iter().position(|y| !y.is_finite()) {
            return Err(Error::Domain { eigenvalue: self.eigenvalues[k] });
        }
        Ok(self.compose(values.into_iter().map(|y| C64::new(y, 0.0))))
    }

    pub fn reconstruct(&self) -> Operator {
        self.map_complex(|x| C64::new(x, 0.0))
    }
}

/// Eigendecomposition of a Hermitian operator with ascending eigenvalues.
pub fn hermitian_eig(a: &Operator) -> Result<Spectrum> {
    a.ensure_hermitian()?;
    let sym = a.hermitian_part().into_matrix();
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let n = order.len();
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, c| eig.eigenvectors[(i, order[c])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors: Operator::from_matrix(vectors)?,
    })
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(a: &Operator) -> Result<Vec<f64>> {
    a.ensure_hermitian()?;
    let mut values: Vec<f64> = a
        .hermitian_part()
        .into_matrix()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// `f(A)` for Hermitian `A` through its spectral decomposition.
pub fn matrix_function(a: &Operator, f: impl Fn(f64) -> f64) -> Result<Operator> {
    hermitian_eig(a)?.map(f)
}

/// Sum of absolute eigenvalues of a Hermitian operator.
pub fn trace_norm(a: &Operator) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.iter().map(|x| x.abs()).sum())
}

/// Largest absolute eigenvalue of a Hermitian operator.
pub fn operator_norm(a: &Operator) -> Result<f64> {
    Ok(hermitian_eigenvalues(a)?.iter().map(|x| x.abs()).fold(0.0, f64::max))
}
