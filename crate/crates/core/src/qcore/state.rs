use super::{QError, C64, NORM_TOL};

/// Normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Normalizes the given amplitudes.
    pub fn new(amps: Vec<C64>) -> Result<Self, QError> {
        let norm = norm(&amps);
        if norm == 0.0 || !norm.is_finite() {
            return Err(QError::ZeroNorm);
        }
        Ok(Self { amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    /// Accepts amplitudes that are already normalized to within 1e-12.
    pub fn from_normalized(amps: Vec<C64>) -> Result<Self, QError> {
        let n = norm(&amps);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(QError::NotNormalized(n));
        }
        Ok(Self { amps })
    }

    /// Wraps the output of a unitary map without touching the norm.
    pub(crate) fn from_unitary_image(amps: Vec<C64>) -> Self {
        Self { amps }
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dimension {dim}");
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<C64, QError> {
        if self.dim() != other.dim() {
            return Err(QError::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// |self⟩ ⊗ |other⟩ with the same index ordering as [`super::tensor`].
    pub fn tensor(&self, other: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self { amps }
    }
}

fn norm(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// Population of the highest Fock level in a field ⊗ spin state.
pub fn top_level_population(psi: &StateVector, fock_dim: usize, spin_dim: usize) -> Result<f64, QError> {
    if psi.dim() != fock_dim * spin_dim {
        return Err(QError::DimensionMismatch { expected: fock_dim * spin_dim, found: psi.dim() });
    }
    let start = (fock_dim - 1) * spin_dim;
    Ok(psi.amps[start..].iter().map(|a| a.norm_sqr()).sum())
}
