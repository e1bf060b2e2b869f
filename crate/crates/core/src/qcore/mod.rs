//! Hilbert-space foundations: truncated bosonic and collective-spin operators,
//! tensor products, state vectors and exact time evolution.
//!
//! Conventions: ħ = 1. Composite spaces are ordered field factor first, spin
//! factor second, so a basis index reads `n * spin_dim + s`.

mod evolve;
mod operator;
mod space;
mod state;

pub use evolve::{evolve, expectation, Propagator, SpectralMeasure};
pub use operator::{tensor, tensor_with_limit, Operator};
pub use space::{collective_spin, collective_spin_xyz, fock_ladder, CollectiveSpinSpace, TruncatedFockSpace};
pub use state::{top_level_population, StateVector};

use thiserror::Error;

pub use num_complex::Complex64 as C64;

/// Runs the dense eigensolver single-threaded in this process, so results do
/// not depend on the machine's core count. Callers that parallelize over
/// independent jobs should call this once up front.
pub fn pin_sequential_linear_algebra() {
    faer::set_global_parallelism(faer::Par::Seq);
}

/// Largest dimension handed to the dense eigensolver unless a caller overrides it.
pub const DEFAULT_EXACT_LIMIT: usize = 4096;

/// Largest dimension `tensor` will allocate unless a caller overrides it.
pub const DEFAULT_TENSOR_LIMIT: usize = 1 << 14;

/// Tolerance for the Hermiticity check on operators and Hamiltonians.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerance on ‖ψ‖ = 1 for states built from already-normalized data.
pub const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("Fock cutoff must be at least 1, got {0}")]
    InvalidCutoff(usize),
    #[error("collective spin space needs at least one atom")]
    InvalidAtomCount,
    #[error("operator is not Hermitian (max |A - A†| = {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("dimension {dim} exceeds the configured limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("state vector is not normalized (norm = {0})")]
    NotNormalized(f64),
    #[error("eigendecomposition did not converge")]
    EigenFailure,
}
