//! Hamiltonian orbits, spectral measures and dephasing semigroups.
//!
//! `ħ = 1` throughout: energies are angular frequencies and `ΔE·Δt` is
//! dimensionless.

pub mod expm;
pub mod orbit;
pub mod semigroup;
pub mod spectral;

pub use expm::expm;
pub use orbit::{propagate, sample_orbit, uniform_grid, Evolution, Generator, Trajectory, UnitaryOrbit};
pub use semigroup::{semigroup_propagate, SemigroupGenerator, SemigroupPropagator};
pub use spectral::{energy_bandwidth, rescale_hamiltonian, spectral_measure, SpectralAtom, SpectralMeasure};
