use faer::{Mat, Side};

use super::{Operator, QError, StateVector, C64, DEFAULT_EXACT_LIMIT, HERMITIAN_TOL};

#[derive(Clone, Debug)]
enum Eigenbasis {
    /// The Hamiltonian was already diagonal.
    Identity,
    Real(Mat<f64>),
    Complex(Mat<C64>),
}

/// Eigendecomposition of a Hermitian H, reused for e^{−iHt} at any number of times.
#[derive(Clone, Debug)]
pub struct Propagator {
    energies: Vec<f64>,
    basis: Eigenbasis,
}

impl Propagator {
    pub fn new(h: &Operator) -> Result<Self, QError> {
        Self::with_limit(h, DEFAULT_EXACT_LIMIT)
    }

    pub fn with_limit(h: &Operator, limit: usize) -> Result<Self, QError> {
        let dim = h.dim();
        if dim > limit {
            return Err(QError::DimensionTooLarge { dim, limit });
        }
        let residual = h.hermiticity_residual();
        if residual >= HERMITIAN_TOL {
            return Err(QError::NonHermitian { residual });
        }
        if h.is_diagonal() {
            let energies = (0..dim).map(|i| h.get(i, i).re).collect();
            return Ok(Self { energies, basis: Eigenbasis::Identity });
        }
        // Real symmetric matrices take the cheaper real path.
        if h.is_real(1e-300) {
            let real = Mat::<f64>::from_fn(dim, dim, |i, j| h.get(i, j).re);
            let evd = real.self_adjoint_eigen(Side::Lower).map_err(|_| QError::EigenFailure)?;
            let energies = (0..dim).map(|k| evd.S()[k]).collect();
            return Ok(Self { energies, basis: Eigenbasis::Real(evd.U().to_owned()) });
        }
        let evd = h.as_mat().self_adjoint_eigen(Side::Lower).map_err(|_| QError::EigenFailure)?;
        let energies = (0..dim).map(|k| evd.S()[k].re).collect();
        Ok(Self { energies, basis: Eigenbasis::Complex(evd.U().to_owned()) })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    /// Eigenvalues in nondecreasing order.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// The k-th eigenvector (eigenvalues ascending).
    pub fn eigenvector(&self, k: usize) -> StateVector {
        let n = self.dim();
        let amps = match &self.basis {
            Eigenbasis::Identity => StateVector::basis(n, k).amplitudes().to_vec(),
            Eigenbasis::Real(u) => u.col_as_slice(k).iter().map(|&x| C64::new(x, 0.0)).collect(),
            Eigenbasis::Complex(u) => u.col_as_slice(k).to_vec(),
        };
        StateVector::from_unitary_image(amps)
    }

    /// Coefficients ⟨k|ψ⟩ in the eigenbasis.
    pub fn to_eigenbasis(&self, psi: &StateVector) -> Result<Vec<C64>, QError> {
        self.check_dim(psi)?;
        let v = psi.amplitudes();
        let n = self.dim();
        Ok(match &self.basis {
            Eigenbasis::Identity => v.to_vec(),
            Eigenbasis::Real(u) => (0..n)
                .map(|k| u.col_as_slice(k).iter().zip(v).map(|(&ui, &vi)| vi * ui).sum())
                .collect(),
            Eigenbasis::Complex(u) => (0..n)
                .map(|k| u.col_as_slice(k).iter().zip(v).map(|(ui, &vi)| ui.conj() * vi).sum())
                .collect(),
        })
    }

    fn from_eigenbasis(&self, coeffs: &[C64]) -> Vec<C64> {
        let n = self.dim();
        match &self.basis {
            Eigenbasis::Identity => coeffs.to_vec(),
            Eigenbasis::Real(u) => {
                let mut out = vec![C64::new(0.0, 0.0); n];
                for (k, &c) in coeffs.iter().enumerate() {
                    for (o, &ui) in out.iter_mut().zip(u.col_as_slice(k)) {
                        *o += c * ui;
                    }
                }
                out
            }
            Eigenbasis::Complex(u) => {
                let mut out = vec![C64::new(0.0, 0.0); n];
                for (k, &c) in coeffs.iter().enumerate() {
                    for (o, &ui) in out.iter_mut().zip(u.col_as_slice(k)) {
                        *o += c * ui;
                    }
                }
                out
            }
        }
    }

    /// ψ(t) = e^{−iHt} ψ.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector, QError> {
        let mut coeffs = self.to_eigenbasis(psi)?;
        for (c, &e) in coeffs.iter_mut().zip(&self.energies) {
            *c *= C64::from_polar(1.0, -e * t);
        }
        Ok(StateVector::from_unitary_image(self.from_eigenbasis(&coeffs)))
    }

    /// Energy distribution of `psi`, enough for ⟨ψ|e^{−iHt}|ψ⟩ at any t.
    pub fn spectral_measure(&self, psi: &StateVector) -> Result<SpectralMeasure, QError> {
        let coeffs = self.to_eigenbasis(psi)?;
        Ok(SpectralMeasure {
            energies: self.energies.clone(),
            weights: coeffs.iter().map(|c| c.norm_sqr()).collect(),
        })
    }

    fn check_dim(&self, psi: &StateVector) -> Result<(), QError> {
        if psi.dim() != self.dim() {
            return Err(QError::DimensionMismatch { expected: self.dim(), found: psi.dim() });
        }
        Ok(())
    }
}

/// Weights |⟨k|ψ⟩|² over the eigenvalues E_k of a Hamiltonian.
#[derive(Clone, Debug)]
pub struct SpectralMeasure {
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl SpectralMeasure {
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Survival amplitude ⟨ψ|e^{−iHt}|ψ⟩ = Σ_k w_k e^{−iE_k t}.
    pub fn amplitude(&self, t: f64) -> C64 {
        self.energies
            .iter()
            .zip(&self.weights)
            .map(|(&e, &w)| C64::from_polar(w, -e * t))
            .sum()
    }

    /// Raw moment ⟨H^k⟩.
    pub fn moment(&self, k: i32) -> f64 {
        self.energies.iter().zip(&self.weights).map(|(&e, &w)| w * e.powi(k)).sum()
    }
}

/// One-shot e^{−iHt}ψ0. Prefer [`Propagator`] when evaluating many times.
pub fn evolve(h: &Operator, psi0: &StateVector, t: f64) -> Result<StateVector, QError> {
    Propagator::new(h)?.evolve(psi0, t)
}

/// ⟨ψ|A|ψ⟩.
pub fn expectation(psi: &StateVector, a: &Operator) -> Result<C64, QError> {
    let av = a.apply(psi.amplitudes())?;
    Ok(psi.amplitudes().iter().zip(&av).map(|(p, q)| p.conj() * q).sum())
}
