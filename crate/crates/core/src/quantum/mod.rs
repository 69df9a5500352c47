//! Dense complex linear algebra and entropy functionals.

pub mod entropy;
pub mod operator;
pub mod spectrum;
pub mod state;

pub use entropy::{
    binary_entropy, relative_entropy, shannon_entropy, trace_distance, von_neumann_entropy,
};
pub use operator::{tensor, Operator, C64};
pub use spectrum::{hermitian_eig, matrix_function, operator_norm, trace_norm, Spectrum};
pub use state::DensityMatrix;
