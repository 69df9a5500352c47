use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::semigroup::{SemigroupGenerator, SemigroupPropagator};
use crate::error::{Error, Result};
use crate::quantum::{hermitian_eig, DensityMatrix, Operator, Spectrum, C64};

/// `exp(-iHt) ρ exp(iHt)`.
pub fn propagate(h: &Operator, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    UnitaryOrbit::new(h, rho)?.state_at(t)
}

/// Orbit of a state under a fixed Hamiltonian, with the eigendecomposition
/// of `H` computed once.
#[derive(Clone, Debug)]
pub struct UnitaryOrbit {
    hamiltonian: Operator,
    spectrum: Spectrum,
    /// `V† ρ V`.
    rotated: DMatrix<C64>,
    /// `V† ψ` when the initial state is pure.
    rotated_vector: Option<DVector<C64>>,
    initial: DensityMatrix,
}

impl UnitaryOrbit {
    pub fn new(h: &Operator, rho: &DensityMatrix) -> Result<Self> {
        h.ensure_same_dim(rho.operator())?;
        let spectrum = hermitian_eig(h)?;
        let v = spectrum.eigenvectors.matrix();
        let rotated = v.adjoint() * rho.operator().matrix() * v;
        let rotated_vector = rho.pure_vector().map(|psi| v.adjoint() * psi);
        Ok(UnitaryOrbit { hamiltonian: h.clone(), spectrum, rotated, rotated_vector, initial: rho.clone() })
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn hamiltonian_spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn initial(&self) -> &DensityMatrix {
        &self.initial
    }

    pub fn is_pure(&self) -> bool {
        self.rotated_vector.is_some()
    }

    fn phases(&self, t: f64) -> Vec<C64> {
        self.spectrum
            .eigenvalues
            .iter()
            .map(|&e| C64::new(0.0, -e * t).exp())
            .collect()
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        if t == 0.0 {
            return Ok(self.initial.clone());
        }
        let ph = self.phases(t);
        let n = ph.len();
        let evolved = DMatrix::from_fn(n, n, |k, l| ph[k] * self.rotated[(k, l)] * ph[l].conj());
        let v = self.spectrum.eigenvectors.matrix();
        DensityMatrix::from_computed(Operator::from_matrix(v * evolved * v.adjoint())?)
    }

    /// `ψ_t = exp(-iHt) ψ` for a pure initial state.
    pub fn vector_at(&self, t: f64) -> Option<DVector<C64>> {
        let rotated = self.rotated_vector.as_ref()?;
        let ph = self.phases(t);
        let evolved = DVector::from_fn(ph.len(), |k, _| ph[k] * rotated[k]);
        Some(self.spectrum.eigenvectors.matrix() * evolved)
    }
}

/// Generator of a clock's dynamics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Generator {
    /// `ρ_t = exp(-iHt) ρ exp(iHt)`.
    Hamiltonian { hamiltonian: Operator },
    /// `ρ_t = exp(Ft)(ρ)` with Hamiltonian part and dephasing.
    Semigroup(SemigroupGenerator),
    /// Qubit amplitude damping `|1> → |0>` at the given rate, in closed
    /// form: populations relax as `ρ₁₁(t) = ρ₁₁ e^{-λt}`, coherences as
    /// `e^{-λt/2}`.
    Relaxation { rate: f64 },
}

impl Generator {
    /// The Hamiltonian part, if any.
    pub fn hamiltonian(&self) -> Option<&Operator> {
        match self {
            Generator::Hamiltonian { hamiltonian } => Some(hamiltonian),
            Generator::Semigroup(g) => Some(&g.hamiltonian),
            Generator::Relaxation { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Generator::Hamiltonian { hamiltonian } => format!("hamiltonian(dim={})", hamiltonian.dim()),
            Generator::Semigroup(g) => format!("semigroup(dim={}, rate={})", g.dim(), g.rate),
            Generator::Relaxation { rate } => format!("relaxation(rate={rate})"),
        }
    }

    /// Whether the orbit is only defined for `t ≥ 0`.
    pub fn is_forward_only(&self) -> bool {
        !matches!(self, Generator::Hamiltonian { .. })
    }
}

/// Ready-to-evaluate orbit of a state under a [`Generator`].
#[derive(Clone, Debug)]
pub enum Evolution {
    Unitary(UnitaryOrbit),
    Semigroup { generator: SemigroupGenerator, propagator: SemigroupPropagator, initial: DensityMatrix },
    Relaxation { rate: f64, initial: DensityMatrix },
}

impl Evolution {
    pub fn new(generator: &Generator, rho0: &DensityMatrix) -> Result<Self> {
        match generator {
            Generator::Hamiltonian { hamiltonian } => Ok(Evolution::Unitary(UnitaryOrbit::new(hamiltonian, rho0)?)),
            Generator::Semigroup(g) => {
                g.dephasing.ensure_dim(rho0.dim())?;
                Ok(Evolution::Semigroup {
                    generator: g.clone(),
                    propagator: SemigroupPropagator::new(g),
                    initial: rho0.clone(),
                })
            }
            Generator::Relaxation { rate } => {
                if rho0.dim() != 2 {
                    return Err(Error::DimensionMismatch { expected: 2, found: rho0.dim() });
                }
                if !(*rate > 0.0) {
                    return Err(Error::InvalidArgument(format!("relaxation rate must be > 0, got {rate}")));
                }
                Ok(Evolution::Relaxation { rate: *rate, initial: rho0.clone() })
            }
        }
    }

    pub fn initial(&self) -> &DensityMatrix {
        match self {
            Evolution::Unitary(o) => o.initial(),
            Evolution::Semigroup { initial, .. } | Evolution::Relaxation { initial, .. } => initial,
        }
    }

    pub fn state_at(&self, t: f64) -> Result<DensityMatrix> {
        match self {
            Evolution::Unitary(o) => o.state_at(t),
            Evolution::Semigroup { propagator, initial, .. } => propagator.propagate(initial, t),
            Evolution::Relaxation { rate, initial } => relaxation_state(*rate, initial, t),
        }
    }

    /// `dρ/dt` at a point `state` of the orbit.
    pub fn velocity(&self, state: &DensityMatrix) -> Result<Operator> {
        match self {
            Evolution::Unitary(o) => {
                o.hamiltonian().ensure_same_dim(state.operator())?;
                Ok(state.operator().commutator(o.hamiltonian()).scale_complex(C64::new(0.0, 1.0)))
            }
            Evolution::Semigroup { generator, .. } => generator.apply(state.operator()),
            Evolution::Relaxation { rate, .. } => {
                let m = state.operator();
                let flow = rate * m.entry(1, 1).re;
                let c = m.entry(0, 1) * (-0.5 * rate);
                Operator::from_rows(&[
                    vec![C64::new(flow, 0.0), c],
                    vec![c.conj(), C64::new(-flow, 0.0)],
                ])
            }
        }
    }
}

fn relaxation_state(rate: f64, rho: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("relaxation is forward-only, got t = {t}")));
    }
    let decay = (-rate * t).exp();
    let m = rho.operator();
    let excited = m.entry(1, 1).re * decay;
    let coherence = m.entry(0, 1) * (-0.5 * rate * t).exp();
    let rows = vec![
        vec![C64::new(1.0 - excited, 0.0), coherence],
        vec![coherence.conj(), C64::new(excited, 0.0)],
    ];
    DensityMatrix::new(Operator::from_rows(&rows)?)
}

/// Uniform grid of `n` points on `[0, horizon]` including both endpoints.
pub fn uniform_grid(horizon: f64, n: usize) -> Vec<f64> {
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| if i + 1 == n { horizon } else { horizon * i as f64 / last })
        .collect()
}

/// States of an orbit on a uniform time grid.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub description: String,
}

impl Trajectory {
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }
}

/// Samples `n_points ≥ 2` states on `[0, horizon]`; each state is computed
/// from `rho0` directly.
pub fn sample_orbit(generator: &Generator, rho0: &DensityMatrix, horizon: f64, n_points: usize) -> Result<Trajectory> {
    if n_points < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 grid points, got {n_points}")));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!("horizon must be positive, got {horizon}")));
    }
    let evolution = Evolution::new(generator, rho0)?;
    let times = uniform_grid(horizon, n_points);
    let states = times
        .par_iter()
        .map(|&t| evolution.state_at(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory { times, states, description: generator.describe() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measurement::ProjectiveMeasurement;
    use crate::quantum::von_neumann_entropy;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rabi_closed_form() {
        let h = Operator::pauli_x().scale(0.5);
        let rho = DensityMatrix::basis_state(2, 0);
        for t in [0.0, 0.4, 1.0, 2.2, 3.0, 7.5] {
            let p1 = propagate(&h, &rho, t).unwrap().operator().entry(1, 1).re;
            assert!((p1 - (t / 2.0).sin().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn stationary_and_time_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        let rho = random::density_matrix(&mut rng, 3, None);
        let h = random::hermitian(&mut rng, 3, 1.0);
        assert_eq!(propagate(&h, &rho, 0.0).unwrap(), rho);
        let diag = DensityMatrix::from_diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let hd = Operator::diagonal(&[0.0, 1.0, 4.0]);
        for t in [0.5, 3.0] {
            assert!(propagate(&hd, &diag, t).unwrap().operator().max_abs_diff(diag.operator()) < 1e-14);
        }
    }

    #[test]
    fn group_law_and_entropy() {
        let mut rng = ChaCha8Rng::seed_from_u64(82);
        let h = random::hermitian(&mut rng, 4, 1.0);
        let rho = random::density_matrix(&mut rng, 4, None);
        let (s, t) = (0.8, -2.1);
        let a = propagate(&h, &rho, s + t).unwrap();
        let b = propagate(&h, &propagate(&h, &rho, s).unwrap(), t).unwrap();
        assert!(a.operator().max_abs_diff(b.operator()) < 1e-9);
        assert!((von_neumann_entropy(&a) - von_neumann_entropy(&rho)).abs() < 1e-10);
    }

    #[test]
    fn pure_vector_tracks_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let h = random::hermitian(&mut rng, 4, 1.0);
        let rho = random::pure_state(&mut rng, 4);
        let orbit = UnitaryOrbit::new(&h, &rho).unwrap();
        let psi = orbit.vector_at(1.3).unwrap();
        let from_vec = DensityMatrix::pure(&psi).unwrap();
        assert!(from_vec.operator().max_abs_diff(orbit.state_at(1.3).unwrap().operator()) < 1e-12);
    }

    #[test]
    fn sampling_grid() {
        let g = Generator::Hamiltonian { hamiltonian: Operator::pauli_x() };
        let rho = DensityMatrix::basis_state(2, 0);
        let tr = sample_orbit(&g, &rho, 2.0, 2).unwrap();
        assert_eq!(tr.times, vec![0.0, 2.0]);
        assert!(sample_orbit(&g, &rho, 2.0, 1).is_err());

        let tr = sample_orbit(&g, &random::density_matrix(&mut ChaCha8Rng::seed_from_u64(1), 2, Some(2)), 5.0, 33).unwrap();
        let s0 = von_neumann_entropy(&tr.states[0]);
        assert!(tr.states.iter().all(|s| (von_neumann_entropy(s) - s0).abs() < 1e-9));
    }

    #[test]
    fn dephasing_trajectory_entropy_nondecreasing() {
        let gen = SemigroupGenerator::new(Operator::zeros(2), ProjectiveMeasurement::computational_basis(2), 1.0).unwrap();
        let plus = DensityMatrix::from_computed(Operator::from_real_rows(&[vec![0.5, 0.5], vec![0.5, 0.5]]).unwrap()).unwrap();
        let tr = sample_orbit(&Generator::Semigroup(gen), &plus, 4.0, 41).unwrap();
        let s: Vec<f64> = tr.states.iter().map(von_neumann_entropy).collect();
        assert!(s.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }

    #[test]
    fn relaxation_closed_form() {
        let g = Generator::Relaxation { rate: 0.5 };
        let ev = Evolution::new(&g, &DensityMatrix::basis_state(2, 1)).unwrap();
        let r = ev.state_at(2.0).unwrap();
        assert!((r.operator().entry(1, 1).re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(r.operator().entry(0, 1).norm() == 0.0);
        assert!(ev.state_at(-1.0).is_err());
    }

    #[test]
    fn velocity_matches_finite_difference() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        let h = random::hermitian(&mut rng, 3, 1.0);
        let rho = random::density_matrix(&mut rng, 3, None);
        let m = random::projective_measurement(&mut rng, 3, None);
        let gens = [
            Generator::Hamiltonian { hamiltonian: h.clone() },
            Generator::Semigroup(SemigroupGenerator::new(h, m, 0.7).unwrap()),
        ];
        let qubit = random::density_matrix(&mut rng, 2, None);
        let relax = Generator::Relaxation { rate: 0.9 };
        let cases: Vec<(&Generator, &DensityMatrix)> = vec![(&gens[0], &rho), (&gens[1], &rho), (&relax, &qubit)];
        for (g, r) in cases {
            let ev = Evolution::new(g, r).unwrap();
            let t = 0.8;
            let eps = 1e-5;
            let fd = (ev.state_at(t + eps).unwrap().operator() - ev.state_at(t - eps).unwrap().operator()).scale(0.5 / eps);
            let v = ev.velocity(&ev.state_at(t).unwrap()).unwrap();
            assert!(fd.max_abs_diff(&v) < 1e-7, "{}", g.describe());
        }
    }
}
