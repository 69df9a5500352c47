//! Entropy generated by reading finite-dimensional quantum clocks.
//!
//! `ħ = 1` and entropies are in nats throughout.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod measurement;
pub mod quantum;
pub mod random;
pub mod runner;
pub mod tightness;
pub mod tol;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
