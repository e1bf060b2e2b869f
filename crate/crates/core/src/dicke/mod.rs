//! Single-mode Dicke model and its integrable large-N limit.
//!
//! The full Hamiltonian is H = ω a†a + Δ Jz + g (a + a†) 2Jx on the field ⊗
//! symmetric-spin space. Dropping Δ leaves H_F, which conserves Σσ₁ᵢ = 2Jx, so
//! in a sector with eigenvalue s the field sees a displaced oscillator and
//! ⟨U_F(t)⟩ has the closed form implemented in [`analytic_expectation`].

mod analytic;
mod collapse;
mod exact;
mod hamiltonian;

pub use analytic::{
    alpha, analytic_expectation, analytic_series, displaced_number_element, laguerre_table, xi, RadiationState,
};
pub use collapse::{collapse_study, envelope, revival_fwhm, recurrence_width, CollapseStudy};
pub use exact::{delta_robustness, exact_series, exact_series_converged, oracle_deviation, ExactSeries, Propagation};
pub use hamiltonian::{build_dicke_hamiltonian, build_hf_hamiltonian, polarized_spin_state};

use thiserror::Error;

use crate::fit::FitError;
use crate::qcore::QError;
use crate::table::TableError;

/// Largest top-Fock-level population tolerated before a run is flagged
/// as truncation-suspect.
pub const TRUNCATION_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DickeError {
    #[error("{0}")]
    InvalidParams(String),
    #[error("polarization s = {s} is not an eigenvalue of Σσ₁ for N = {n_atoms}")]
    InvalidSector { s: i64, n_atoms: usize },
    #[error("radiation state has support at n = {support}, within 2 levels of the cutoff {cutoff}")]
    CutoffTooSmall { support: usize, cutoff: usize },
    #[error("radiation state is not normalized (Σ|c|² = {0})")]
    NotNormalized(f64),
    #[error("envelope for N = {n_atoms} never falls to half maximum; peak width undefined")]
    NoHalfMaximum { n_atoms: usize },
    #[error("fit failed: {0}")]
    FitFailed(#[from] FitError),
    #[error(transparent)]
    Quantum(#[from] QError),
    #[error(transparent)]
    Table(#[from] TableError),
}

/// Knobs of the single-mode model. `delta = 0` selects H_F.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DickeParams {
    pub omega: f64,
    pub delta: f64,
    pub g: f64,
    pub n_atoms: usize,
    pub fock_cutoff: usize,
}

impl DickeParams {
    pub fn new(omega: f64, delta: f64, g: f64, n_atoms: usize, fock_cutoff: usize) -> Result<Self, DickeError> {
        let p = Self { omega, delta, g, n_atoms, fock_cutoff };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DickeError> {
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return Err(DickeError::InvalidParams("omega must be positive".into()));
        }
        if !(self.g > 0.0) || !self.g.is_finite() {
            return Err(DickeError::InvalidParams("g must be positive".into()));
        }
        if !(self.delta >= 0.0) || !self.delta.is_finite() {
            return Err(DickeError::InvalidParams("delta must be non-negative".into()));
        }
        if self.n_atoms < 1 {
            return Err(DickeError::InvalidParams("n_atoms must be at least 1".into()));
        }
        if self.fock_cutoff < 1 {
            return Err(DickeError::InvalidParams("fock_cutoff must be at least 1".into()));
        }
        Ok(())
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_atoms(mut self, n_atoms: usize) -> Self {
        self.n_atoms = n_atoms;
        self
    }

    pub fn with_cutoff(mut self, fock_cutoff: usize) -> Self {
        self.fock_cutoff = fock_cutoff;
        self
    }

    /// Revival period 2π/ω.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega
    }
}

/// Eigenvalue s of Σσ₁ᵢ labelling a conserved sector of H_F.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolarizationSector {
    s: i64,
}

impl PolarizationSector {
    pub fn new(s: i64, n_atoms: usize) -> Result<Self, DickeError> {
        let n = n_atoms as i64;
        if s.abs() > n || (s - n).rem_euclid(2) != 0 {
            return Err(DickeError::InvalidSector { s, n_atoms });
        }
        Ok(Self { s })
    }

    /// s = N: every atom in the +1 eigenstate of σ₁.
    pub fn fully_polarized(n_atoms: usize) -> Self {
        Self { s: n_atoms as i64 }
    }

    pub fn value(&self) -> i64 {
        self.s
    }
}

/// 1 − cos x without cancellation at small x.
pub(crate) fn one_minus_cos(x: f64) -> f64 {
    let h = (0.5 * x).sin();
    2.0 * h * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_validation() {
        assert!(DickeParams::new(1.0, 0.0, 0.1, 4, 8).is_ok());
        let err = DickeParams::new(1.0, 0.0, -0.1, 4, 8).unwrap_err();
        assert_eq!(err.to_string(), "g must be positive");
        assert!(DickeParams::new(0.0, 0.0, 0.1, 4, 8).is_err());
        assert!(DickeParams::new(1.0, -1.0, 0.1, 4, 8).is_err());
        assert!(DickeParams::new(1.0, 0.0, 0.1, 0, 8).is_err());
        assert!(DickeParams::new(1.0, 0.0, 0.1, 4, 0).is_err());
    }

    #[test]
    fn sectors() {
        assert!(PolarizationSector::new(4, 4).is_ok());
        assert!(PolarizationSector::new(-2, 4).is_ok());
        assert!(PolarizationSector::new(3, 4).is_err());
        assert!(PolarizationSector::new(6, 4).is_err());
        assert!(PolarizationSector::new(-3, 3).is_ok());
        assert_eq!(PolarizationSector::fully_polarized(7).value(), 7);
    }
}
