//! Seeded random instances for audits and property tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::measurement::ProjectiveMeasurement;
use crate::quantum::{DensityMatrix, Operator, C64};

fn gaussian_c64<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_c64(rng))
}

pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DVector<C64> {
    let v = DVector::from_fn(dim, |_, _| gaussian_c64(rng));
    let n = v.norm();
    v / C64::new(n, 0.0)
}

/// Hermitian matrix with Gaussian entries of standard deviation ~`scale`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Operator {
    let g = ginibre(rng, dim, dim);
    let h = (&g + g.adjoint()) * C64::new(0.5 * scale, 0.0);
    Operator::from_matrix(h).unwrap()
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Operator {
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for (k, mut col) in q.column_iter_mut().enumerate() {
        let d = r[(k, k)];
        let phase = if d.norm() > 0.0 { d / C64::new(d.norm(), 0.0) } else { C64::new(1.0, 0.0) };
        col *= phase;
    }
    Operator::from_matrix(q).unwrap()
}

/// Random density matrix `GG†/tr(GG†)` of the given rank (uniform in
/// `1..=dim` when `None`).
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: Option<usize>) -> DensityMatrix {
    let rank = rank.unwrap_or_else(|| rng.gen_range(1..=dim)).clamp(1, dim);
    let g = ginibre(rng, dim, rank);
    let w = &g * g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::from_computed(Operator::from_matrix(w / C64::new(tr, 0.0)).unwrap()).unwrap()
}

pub fn pure_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    DensityMatrix::pure(&unit_vector(rng, dim)).unwrap()
}

/// Random composition of `dim` into `parts` positive sizes.
pub fn partition<R: Rng + ?Sized>(rng: &mut R, dim: usize, parts: usize) -> Vec<usize> {
    let parts = parts.clamp(1, dim);
    let mut sizes = vec![1; parts];
    for _ in 0..dim - parts {
        let k = rng.gen_range(0..parts);
        sizes[k] += 1;
    }
    sizes
}

/// Projective measurement obtained by grouping the columns of a Haar
/// unitary; the outcome count is uniform in `2..=dim` when `None`.
pub fn projective_measurement<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    outcomes: Option<usize>,
) -> ProjectiveMeasurement {
    let outcomes = outcomes.unwrap_or_else(|| rng.gen_range(2.min(dim)..=dim));
    let sizes = partition(rng, dim, outcomes);
    let u = unitary(rng, dim);
    ProjectiveMeasurement::from_basis(&u, &sizes).unwrap()
}
