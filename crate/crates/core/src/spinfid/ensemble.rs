use super::{ProductState, SpinError};
use crate::qcore::{Operator, Propagator, QError, C64, DEFAULT_EXACT_LIMIT, HERMITIAN_TOL};
use crate::rng::SplitMix64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    Site(usize),
    /// Sites (i, i+1).
    Pair(usize),
}

impl Support {
    pub fn first(&self) -> usize {
        match *self {
            Support::Site(i) | Support::Pair(i) => i,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Support::Site(_) => 1,
            Support::Pair(_) => 2,
        }
    }

    pub fn last(&self) -> usize {
        self.first() + self.len() - 1
    }

    pub fn overlaps(&self, other: &Support) -> bool {
        self.first() <= other.last() && other.first() <= self.last()
    }
}

#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub support: Support,
    pub matrix: Operator,
}

/// H = Σᵢ Hᵢ over single-site and nearest-neighbour terms.
#[derive(Clone, Debug)]
pub struct LocalHamiltonianEnsemble {
    n_sites: usize,
    terms: Vec<LocalTerm>,
    model_tag: String,
}

fn pauli() -> [Operator; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    [
        Operator::from_rows(&[vec![z, one], vec![one, z]]),
        Operator::from_rows(&[vec![z, -i], vec![i, z]]),
        Operator::from_rows(&[vec![one, z], vec![z, -one]]),
    ]
}

fn kron2(a: &Operator, b: &Operator) -> Operator {
    crate::qcore::tensor(a, b).expect("4×4 is within any tensor limit")
}

impl LocalHamiltonianEnsemble {
    pub fn new(n_sites: usize, terms: Vec<LocalTerm>, model_tag: &str) -> Result<Self, SpinError> {
        for (index, term) in terms.iter().enumerate() {
            if term.support.last() >= n_sites {
                return Err(SpinError::SupportMismatch { site: term.support.last(), n_sites });
            }
            let expected = 1 << term.support.len();
            if term.matrix.dim() != expected {
                return Err(SpinError::TermShape { expected, found: term.matrix.dim() });
            }
            let residual = term.matrix.hermiticity_residual();
            if residual >= HERMITIAN_TOL {
                return Err(SpinError::NonHermitianTerm { index, residual });
            }
        }
        Ok(Self { n_sites, terms, model_tag: model_tag.to_owned() })
    }

    /// Hᵢ = (Δ/2)σ₃ on every site.
    pub fn independent_field(n_sites: usize, delta: f64) -> Self {
        let [_, _, sz] = pauli();
        let term = sz.scale_real(0.5 * delta);
        let terms = (0..n_sites).map(|i| LocalTerm { support: Support::Site(i), matrix: term.clone() }).collect();
        Self::new(n_sites, terms, "independent-field").expect("valid by construction")
    }

    /// H = −J Σ σ₃ᵢσ₃ᵢ₊₁ − h Σ σ₁ᵢ with open boundaries.
    pub fn transverse_ising(n_sites: usize, j: f64, h: f64) -> Self {
        let [sx, _, sz] = pauli();
        let bond = kron2(&sz, &sz).scale_real(-j);
        let field = sx.scale_real(-h);
        let mut terms: Vec<LocalTerm> = (0..n_sites.saturating_sub(1))
            .map(|i| LocalTerm { support: Support::Pair(i), matrix: bond.clone() })
            .collect();
        terms.extend((0..n_sites).map(|i| LocalTerm { support: Support::Site(i), matrix: field.clone() }));
        Self::new(n_sites, terms, "transverse-ising").expect("valid by construction")
    }

    /// Random Hermitian site and bond terms with entries in [−1, 1].
    pub fn random(n_sites: usize, rng: &mut SplitMix64) -> Self {
        let mut random_hermitian = |dim: usize| {
            let mut rows = vec![vec![C64::new(0.0, 0.0); dim]; dim];
            for i in 0..dim {
                rows[i][i] = C64::new(2.0 * rng.next_f64() - 1.0, 0.0);
                for j in (i + 1)..dim {
                    let z = C64::new(2.0 * rng.next_f64() - 1.0, 2.0 * rng.next_f64() - 1.0);
                    rows[i][j] = z;
                    rows[j][i] = z.conj();
                }
            }
            Operator::from_rows(&rows)
        };
        let mut terms = Vec::new();
        for i in 0..n_sites {
            terms.push(LocalTerm { support: Support::Site(i), matrix: random_hermitian(2) });
            if i + 1 < n_sites {
                terms.push(LocalTerm { support: Support::Pair(i), matrix: random_hermitian(4) });
            }
        }
        Self::new(n_sites, terms, "random-local").expect("valid by construction")
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn terms(&self) -> &[LocalTerm] {
        &self.terms
    }

    pub fn model_tag(&self) -> &str {
        &self.model_tag
    }

    /// Largest |eigenvalue| over all terms: the smallest admissible C′.
    pub fn term_bound(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let prop = Propagator::new(&t.matrix).expect("terms are small and Hermitian");
                prop.energies().iter().fold(0.0f64, |m, e| m.max(e.abs()))
            })
            .fold(0.0, f64::max)
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_sites
    }

    /// Visits every nonzero full-space matrix element (row, col, value), term by term.
    fn for_each_element(&self, col: usize, mut visit: impl FnMut(usize, C64)) {
        let n = self.n_sites;
        for term in &self.terms {
            let first = term.support.first();
            let len = term.support.len();
            // Local bits occupy positions n−1−first … n−len−first (MSB first).
            let shift = n - first - len;
            let mask = ((1usize << len) - 1) << shift;
            let local_in = (col & mask) >> shift;
            for local_out in 0..(1usize << len) {
                let v = term.matrix.get(local_out, local_in);
                if v != C64::new(0.0, 0.0) {
                    visit((col & !mask) | (local_out << shift), v);
                }
            }
        }
    }

    /// H v on the full 2^N space.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>, SpinError> {
        let dim = self.dim();
        if v.len() != dim {
            return Err(QError::DimensionMismatch { expected: dim, found: v.len() }.into());
        }
        let mut out = vec![C64::new(0.0, 0.0); dim];
        for (col, &x) in v.iter().enumerate() {
            if x == C64::new(0.0, 0.0) {
                continue;
            }
            self.for_each_element(col, |row, h| out[row] += h * x);
        }
        Ok(out)
    }

    /// Dense full-space H, subject to the exact-diagonalization limit.
    pub fn dense(&self) -> Result<Operator, SpinError> {
        let dim = self.dim();
        if self.n_sites >= usize::BITS as usize - 1 || dim > DEFAULT_EXACT_LIMIT {
            return Err(QError::DimensionTooLarge { dim, limit: DEFAULT_EXACT_LIMIT }.into());
        }
        let mut cols: Vec<Vec<(usize, C64)>> = Vec::with_capacity(dim);
        for col in 0..dim {
            let mut entries = Vec::new();
            self.for_each_element(col, |row, h| entries.push((row, h)));
            cols.push(entries);
        }
        let mut dense = vec![C64::new(0.0, 0.0); dim * dim];
        for (col, entries) in cols.iter().enumerate() {
            for &(row, h) in entries {
                dense[row * dim + col] += h;
            }
        }
        Ok(Operator::from_fn(dim, |i, j| dense[i * dim + j]))
    }

    pub(crate) fn check_state(&self, phi: &ProductState) -> Result<(), SpinError> {
        if phi.n_sites() != self.n_sites {
            return Err(SpinError::SiteCountMismatch { expected: self.n_sites, found: phi.n_sites() });
        }
        Ok(())
    }
}

/// Built-in model families with a default reference product state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelFamily {
    /// Hᵢ = (Δ/2)σ₃, state ⊗|+⟩; exactly solvable.
    IndependentField { delta: f64 },
    /// Open transverse-field Ising chain; every site at Bloch angles (θ, φ).
    TransverseIsing { j: f64, h: f64, theta: f64, phi: f64 },
}

impl ModelFamily {
    pub fn ensemble(&self, n_sites: usize) -> LocalHamiltonianEnsemble {
        match *self {
            ModelFamily::IndependentField { delta } => LocalHamiltonianEnsemble::independent_field(n_sites, delta),
            ModelFamily::TransverseIsing { j, h, .. } => LocalHamiltonianEnsemble::transverse_ising(n_sites, j, h),
        }
    }

    pub fn reference_state(&self, n_sites: usize) -> ProductState {
        match *self {
            ModelFamily::IndependentField { .. } => ProductState::all_plus(n_sites),
            ModelFamily::TransverseIsing { theta, phi, .. } => ProductState::uniform(n_sites, theta, phi),
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            ModelFamily::IndependentField { .. } => "independent-field",
            ModelFamily::TransverseIsing { .. } => "transverse-ising",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_checks() {
        let [sx, _, _] = pauli();
        let bad = LocalHamiltonianEnsemble::new(3, vec![LocalTerm { support: Support::Pair(2), matrix: kron2(&sx, &sx) }], "x");
        assert!(matches!(bad, Err(SpinError::SupportMismatch { site: 3, n_sites: 3 })));
        let wrong_shape = LocalHamiltonianEnsemble::new(3, vec![LocalTerm { support: Support::Pair(0), matrix: sx.clone() }], "x");
        assert!(matches!(wrong_shape, Err(SpinError::TermShape { expected: 4, found: 2 })));
        let nonherm = Operator::from_fn(2, |i, j| C64::new((i + 2 * j) as f64, 0.0));
        let bad = LocalHamiltonianEnsemble::new(2, vec![LocalTerm { support: Support::Site(0), matrix: nonherm }], "x");
        assert!(matches!(bad, Err(SpinError::NonHermitianTerm { index: 0, .. })));
    }

    #[test]
    fn apply_matches_dense() {
        let ens = LocalHamiltonianEnsemble::random(5, &mut SplitMix64::new(8));
        let dense = ens.dense().unwrap();
        assert!(dense.hermiticity_residual() < 1e-12);
        let v: Vec<C64> = (0..32).map(|k| C64::new((k as f64 * 0.3).sin(), (k as f64 * 0.7).cos())).collect();
        let a = ens.apply(&v).unwrap();
        let b = dense.apply(&v).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn ising_pair_term_acts_on_neighbours() {
        // With h = 0 the Ising chain is diagonal: −J Σ sᵢsᵢ₊₁.
        let ens = LocalHamiltonianEnsemble::transverse_ising(3, 1.0, 0.0);
        let dense = ens.dense().unwrap();
        // |0 1 1⟩ = index 3: s = (+1, −1, −1) → −(−1 + 1) = 0
        assert!(dense.get(3, 3).norm() < 1e-15);
        // |0 0 0⟩: −2
        assert!((dense.get(0, 0) - C64::new(-2.0, 0.0)).norm() < 1e-15);
        // |0 1 0⟩ = index 2: −(−1 − 1) = 2
        assert!((dense.get(2, 2) - C64::new(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn term_bounds() {
        assert!((LocalHamiltonianEnsemble::independent_field(4, 1.0).term_bound() - 0.5).abs() < 1e-12);
        assert!((LocalHamiltonianEnsemble::transverse_ising(4, 1.0, 0.7).term_bound() - 1.0).abs() < 1e-12);
    }
}
