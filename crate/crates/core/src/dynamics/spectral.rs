use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{hermitian_eig, DensityMatrix, Operator};
use crate::tol;

/// One atom of a spectral measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralAtom {
    pub energy: f64,
    pub weight: f64,
    pub rank: usize,
}

/// Occupation probabilities of the distinct eigenvalues of a Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralMeasure {
    /// Energies ascending.
    pub atoms: Vec<SpectralAtom>,
}

impl SpectralMeasure {
    pub fn total_weight(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum()
    }

    /// `(E_min, E_max)` over atoms with weight above `occupation_tol`.
    pub fn support(&self, occupation_tol: f64) -> Option<(f64, f64)> {
        let mut occupied = self.atoms.iter().filter(|a| a.weight > occupation_tol);
        let first = occupied.next()?;
        let last = occupied.last().unwrap_or(first);
        Some((first.energy, last.energy))
    }
}

/// Spectral measure of `rho` with respect to `h`; eigenvalues closer than
/// `1e-9 · (λ_max - λ_min)` are merged into one atom.
pub fn spectral_measure(h: &Operator, rho: &DensityMatrix) -> Result<SpectralMeasure> {
    h.ensure_same_dim(rho.operator())?;
    let s = hermitian_eig(h)?;
    let spread = s.eigenvalues.last().unwrap() - s.eigenvalues[0];
    let merge = tol::EIGENVALUE_MERGE * spread;
    let weights: Vec<f64> = (0..s.dim())
        .map(|k| rho.operator().expectation(&s.eigenvector(k)).re)
        .collect();

    let mut atoms: Vec<SpectralAtom> = Vec::new();
    let mut cluster_sum = 0.0;
    for (k, &e) in s.eigenvalues.iter().enumerate() {
        match atoms.last_mut() {
            Some(atom) if e - s.eigenvalues[k - 1] <= merge => {
                cluster_sum += e;
                atom.rank += 1;
                atom.weight += weights[k];
                atom.energy = cluster_sum / atom.rank as f64;
            }
            _ => {
                cluster_sum = e;
                atoms.push(SpectralAtom { energy: e, weight: weights[k], rank: 1 });
            }
        }
    }
    for atom in &mut atoms {
        atom.weight = atom.weight.max(0.0);
    }
    Ok(SpectralMeasure { atoms })
}

/// `ΔE = E_max - E_min` over the occupied part of the spectral measure.
pub fn energy_bandwidth(h: &Operator, rho: &DensityMatrix, occupation_tol: f64) -> Result<f64> {
    let (lo, hi) = spectral_measure(h, rho)?
        .support(occupation_tol)
        .ok_or_else(|| Error::InvalidState("no spectral atom above the occupation cutoff".into()))?;
    Ok(hi - lo)
}

/// `H' = Π (H - ½(E_max + E_min))` with `Π` the spectral projection onto
/// `[E_min, E_max]`; generates the same orbit of `rho` and has operator norm
/// at most `ΔE/2`.
pub fn rescale_hamiltonian(h: &Operator, rho: &DensityMatrix, occupation_tol: f64) -> Result<Operator> {
    let measure = spectral_measure(h, rho)?;
    let (lo, hi) = measure
        .support(occupation_tol)
        .ok_or_else(|| Error::InvalidState("no spectral atom above the occupation cutoff".into()))?;
    if hi - lo <= 0.0 {
        return Err(Error::NoClock);
    }
    let s = hermitian_eig(h)?;
    let spread = s.eigenvalues.last().unwrap() - s.eigenvalues[0];
    let slack = tol::EIGENVALUE_MERGE * spread;
    let mid = 0.5 * (hi + lo);
    let half = 0.5 * (hi - lo);
    Ok(s.map(|e| {
        if e >= lo - slack && e <= hi + slack {
            (e - mid).clamp(-half, half)
        } else {
            0.0
        }
    })?
    .hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::propagate;
    use crate::quantum::operator_norm;
    use crate::random;
    use nalgebra::DVector;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_measure() {
        let h = Operator::diagonal(&[0.0, 1.0, 2.0]);
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.0, 0.5]).unwrap();
        let m = spectral_measure(&h, &rho).unwrap();
        let got: Vec<(f64, f64)> = m.atoms.iter().map(|a| (a.energy, a.weight)).collect();
        assert_eq!(got, vec![(0.0, 0.5), (1.0, 0.0), (2.0, 0.5)]);
        assert_eq!(energy_bandwidth(&h, &rho, tol::OCCUPATION).unwrap(), 2.0);
    }

    #[test]
    fn degenerate_levels_merge() {
        let h = Operator::diagonal(&[1.0, 0.0, 1.0 + 1e-12]);
        let m = spectral_measure(&h, &DensityMatrix::maximally_mixed(3)).unwrap();
        assert_eq!(m.atoms.len(), 2);
        assert_eq!(m.atoms[1].rank, 2);
        assert!((m.atoms[1].weight - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn eigenstate_is_single_atom() {
        let h = Operator::pauli_x();
        let v = DVector::from_vec(vec![crate::quantum::C64::new(1.0, 0.0); 2]);
        let rho = DensityMatrix::pure(&v).unwrap();
        let m = spectral_measure(&h, &rho).unwrap();
        assert_eq!(m.support(tol::OCCUPATION), Some((1.0, 1.0)));
        assert!(energy_bandwidth(&h, &rho, tol::OCCUPATION).unwrap().abs() < 1e-12);
        assert!(matches!(rescale_hamiltonian(&h, &rho, tol::OCCUPATION), Err(Error::NoClock)));
    }

    #[test]
    fn rabi_bandwidth_is_one() {
        let h = Operator::pauli_x().scale(0.5);
        let rho = DensityMatrix::basis_state(2, 0);
        assert!((energy_bandwidth(&h, &rho, tol::OCCUPATION).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn measure_invariant_along_orbit() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for _ in 0..5 {
            let h = random::hermitian(&mut rng, 5, 1.0);
            let rho = random::density_matrix(&mut rng, 5, None);
            let m0 = spectral_measure(&h, &rho).unwrap();
            let m1 = spectral_measure(&h, &propagate(&h, &rho, 1.7).unwrap()).unwrap();
            for (a, b) in m0.atoms.iter().zip(&m1.atoms) {
                assert!((a.weight - b.weight).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn rescaling_examples() {
        let rho = DensityMatrix::maximally_mixed(2);
        let hp = rescale_hamiltonian(&Operator::diagonal(&[5.0, 6.0]), &rho, tol::OCCUPATION).unwrap();
        assert!(hp.max_abs_diff(&Operator::diagonal(&[-0.5, 0.5])) < 1e-14);

        let centered = Operator::diagonal(&[-1.0, 0.25, 1.0]);
        let hp = rescale_hamiltonian(&centered, &DensityMatrix::maximally_mixed(3), tol::OCCUPATION).unwrap();
        assert!(hp.max_abs_diff(&centered) < 1e-14);

        let h = Operator::diagonal(&[0.0, 1.0, 2.0, 99.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(62);
        let mut psi = random::unit_vector(&mut rng, 4);
        psi[3] = crate::quantum::C64::new(0.0, 0.0);
        let rho = DensityMatrix::pure(&psi).unwrap();
        let hp = rescale_hamiltonian(&h, &rho, tol::OCCUPATION).unwrap();
        assert!(operator_norm(&hp).unwrap() <= 1.0 + 1e-10);
        for k in 0..10 {
            let t = 0.37 * k as f64;
            let a = propagate(&h, &rho, t).unwrap();
            let b = propagate(&hp, &rho, t).unwrap();
            assert!(a.operator().max_abs_diff(b.operator()) < 1e-9);
        }
    }
}
