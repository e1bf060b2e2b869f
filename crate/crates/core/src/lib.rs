//! Numerical models of intrinsic decoherence at large particle number.
//!
//! - [`qcore`]: Fock and collective-spin operators, exact propagation.
//! - [`dicke`]: Dicke and integrable-limit Hamiltonians, analytic collapse and revival.
//! - [`spinfid`]: many-body fidelity of product states and its Gaussian limit.
//! - [`tfvlasov`]: Thomas-Fermi functional, semiclassical diagnostics and Vlasov–Poisson kinetics.

pub mod dicke;
pub mod fit;
pub mod qcore;
pub mod rng;
pub mod spinfid;
pub mod table;
pub mod tfvlasov;

pub use fit::{fit_power_law, FitError, PowerLawFit};
pub use table::{ResultTable, TableError};
