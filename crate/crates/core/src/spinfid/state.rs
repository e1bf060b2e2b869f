use super::SpinError;
use crate::qcore::{StateVector, C64, NORM_TOL};
use crate::rng::SplitMix64;

/// ⊗ᵢ |φᵢ⟩ with one normalized two-component vector per site.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductState {
    local: Vec<[C64; 2]>,
}

impl ProductState {
    pub fn new(local: Vec<[C64; 2]>) -> Result<Self, SpinError> {
        for (i, v) in local.iter().enumerate() {
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            if (n - 1.0).abs() > NORM_TOL {
                return Err(SpinError::NotNormalized(i));
            }
        }
        Ok(Self { local })
    }

    /// Every site at Bloch angles (θ, φ): cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩.
    pub fn uniform(n_sites: usize, theta: f64, phi: f64) -> Self {
        Self { local: vec![bloch(theta, phi); n_sites] }
    }

    /// Every site in |+⟩, the +1 eigenstate of σ₁.
    pub fn all_plus(n_sites: usize) -> Self {
        Self::uniform(n_sites, std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// Every site in |0⟩, the +1 eigenstate of σ₃.
    pub fn all_up(n_sites: usize) -> Self {
        Self::uniform(n_sites, 0.0, 0.0)
    }

    /// Sites drawn uniformly on the Bloch sphere.
    pub fn random(n_sites: usize, rng: &mut SplitMix64) -> Self {
        let local = (0..n_sites)
            .map(|_| {
                let theta = (1.0 - 2.0 * rng.next_f64()).acos();
                let phi = 2.0 * std::f64::consts::PI * rng.next_f64();
                bloch(theta, phi)
            })
            .collect();
        Self { local }
    }

    pub fn n_sites(&self) -> usize {
        self.local.len()
    }

    pub fn site(&self, i: usize) -> [C64; 2] {
        self.local[i]
    }

    /// Product of the local vectors for sites `start..start + len`.
    pub(crate) fn block(&self, start: usize, len: usize) -> Vec<C64> {
        let mut out = vec![C64::new(1.0, 0.0)];
        for v in &self.local[start..start + len] {
            out = out.iter().flat_map(|a| [a * v[0], a * v[1]]).collect();
        }
        out
    }

    /// The full 2^N vector.
    pub fn to_state_vector(&self) -> StateVector {
        StateVector::from_normalized(self.block(0, self.n_sites())).expect("product of normalized vectors")
    }
}

fn bloch(theta: f64, phi: f64) -> [C64; 2] {
    [C64::new((0.5 * theta).cos(), 0.0), C64::from_polar((0.5 * theta).sin(), phi)]
}
