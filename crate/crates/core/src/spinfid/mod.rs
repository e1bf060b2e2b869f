//! Fidelity of product states under sums of bounded local Hamiltonians on a
//! spin-½ chain, and its approach to the Gaussian e^{−σ²t²}.
//!
//! Full-space basis ordering: site 0 is the most significant bit, so a basis
//! index is Σᵢ bᵢ 2^{N−1−i} and a pair term on (i, i+1) acts on the local index
//! 2bᵢ + bᵢ₊₁.

mod ensemble;
mod fidelity;
mod state;

pub use ensemble::{LocalHamiltonianEnsemble, LocalTerm, ModelFamily, Support};
pub use fidelity::{
    check_hypotheses, convergence_study, fidelity, gaussian_prediction, short_time_coefficients, variance,
    ConvergenceStudy, FidelityCurve, ShortTimeCoefficients, TheoremReport,
};
pub use state::ProductState;

use thiserror::Error;

use crate::qcore::QError;
use crate::table::TableError;

/// Largest Hilbert-space dimension for moment evaluation by full-space
/// matrix–vector products.
pub const MOMENT_LIMIT: usize = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("term references site {site} outside [0, {n_sites})")]
    SupportMismatch { site: usize, n_sites: usize },
    #[error("term matrix has dimension {found}, expected {expected} for its support")]
    TermShape { expected: usize, found: usize },
    #[error("term {index} is not Hermitian (residual {residual:.3e})")]
    NonHermitianTerm { index: usize, residual: f64 },
    #[error("state has {found} sites, ensemble has {expected}")]
    SiteCountMismatch { expected: usize, found: usize },
    #[error("local state {0} is not normalized")]
    NotNormalized(usize),
    #[error("{0}")]
    InvalidInput(String),
    #[error(transparent)]
    Quantum(#[from] QError),
    #[error(transparent)]
    Table(#[from] TableError),
}
