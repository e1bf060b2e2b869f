use super::{Operator, QError, C64};

/// Single bosonic mode truncated to photon numbers `0..=cutoff`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncatedFockSpace {
    cutoff: usize,
}

impl TruncatedFockSpace {
    pub fn new(cutoff: usize) -> Result<Self, QError> {
        if cutoff < 1 {
            return Err(QError::InvalidCutoff(cutoff));
        }
        Ok(Self { cutoff })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.cutoff + 1
    }
}

/// Symmetric (j = N/2) sector of N two-level atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CollectiveSpinSpace {
    n_atoms: usize,
}

impl CollectiveSpinSpace {
    pub fn new(n_atoms: usize) -> Result<Self, QError> {
        if n_atoms < 1 {
            return Err(QError::InvalidAtomCount);
        }
        Ok(Self { n_atoms })
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        self.n_atoms + 1
    }

    /// Total spin j = N/2.
    pub fn j(&self) -> f64 {
        self.n_atoms as f64 / 2.0
    }

    /// Magnetic quantum number of basis index `k`; the basis runs m = j, j−1, …, −j.
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }
}

/// Returns (a, a†). The truncation leaves a†|M⟩ = 0.
pub fn fock_ladder(space: &TruncatedFockSpace) -> (Operator, Operator) {
    let dim = space.dim();
    let a = Operator::from_fn(dim, |i, j| {
        if j == i + 1 {
            C64::new((j as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let adag = a.adjoint();
    (a, adag)
}

/// Returns (Jx, Jz) on the j = N/2 irrep. Σσ₁ᵢ ↦ 2Jx and Σσ₃ᵢ ↦ 2Jz.
pub fn collective_spin(space: &CollectiveSpinSpace) -> (Operator, Operator) {
    let (jx, _, jz) = collective_spin_xyz(space);
    (jx, jz)
}

/// Returns (Jx, Jy, Jz).
pub fn collective_spin_xyz(space: &CollectiveSpinSpace) -> (Operator, Operator, Operator) {
    let dim = space.dim();
    let j = space.j();
    // J+ |m⟩ = sqrt(j(j+1) − m(m+1)) |m+1⟩; index k−1 holds m+1.
    let raise = |row: usize, col: usize| -> f64 {
        if col >= 1 && row == col - 1 {
            let m = space.m(col);
            (j * (j + 1.0) - m * (m + 1.0)).sqrt()
        } else {
            0.0
        }
    };
    let jx = Operator::from_fn(dim, |r, c| C64::new(0.5 * (raise(r, c) + raise(c, r)), 0.0));
    let jy = Operator::from_fn(dim, |r, c| C64::new(0.0, -0.5 * (raise(r, c) - raise(c, r))));
    let jz = Operator::diagonal(&(0..dim).map(|k| space.m(k)).collect::<Vec<_>>());
    let jx = jx.into_hermitian().expect("Jx is Hermitian by construction");
    let jy = jy.into_hermitian().expect("Jy is Hermitian by construction");
    (jx, jy, jz)
}
