//! Periodic-grid field containers, central-difference vector calculus, and
//! the Poisson/Helmholtz machinery used for Coulomb-gauge enforcement.

mod field;
mod grid;
pub mod ops;
mod poisson;

pub use field::{Norms, ScalarField, VectorField};
pub use grid::{GridSpec, StencilOrder};
pub use ops::{
    advect, curl, curl_curl, diff, div, grad, grad_contract, laplacian, vector_laplacian, Central, DiffOps,
};
pub use poisson::{helmholtz_project, iteration_budget, poisson_solve, DEFAULT_TOL};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FieldError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("field length {found} does not match grid size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("Poisson right-hand side has mean {mean:e} (rms {rms:e}); subtract it first")]
    NonZeroMean { mean: f64, rms: f64 },
    #[error("Poisson solver did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
}
