use std::ops::{Add, Mul, Sub};

use faer::Mat;

use super::{QError, C64, DEFAULT_TENSOR_LIMIT, HERMITIAN_TOL};

/// Dense complex operator on a finite-dimensional space.
#[derive(Clone, Debug)]
pub struct Operator {
    mat: Mat<C64>,
    hermitian: bool,
}

impl Operator {
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        Self { mat: Mat::from_fn(dim, dim, |i, j| f(i, j)), hermitian: false }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| C64::new(0.0, 0.0))
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut op = Self::from_fn(entries.len(), |i, j| {
            if i == j {
                C64::new(entries[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        op.hermitian = true;
        op
    }

    /// Builds from row-major nested rows; panics on ragged input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "operator rows must be square");
        Self::from_fn(dim, |i, j| rows[i][j])
    }

    pub(crate) fn from_mat(mat: Mat<C64>) -> Self {
        Self { mat, hermitian: false }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<C64> {
        &self.mat
    }

    pub fn is_flagged_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Sets the Hermiticity flag after verifying ‖A − A†‖_max < 1e-12.
    pub fn into_hermitian(mut self) -> Result<Self, QError> {
        let residual = self.hermiticity_residual();
        if residual >= HERMITIAN_TOL {
            return Err(QError::NonHermitian { residual });
        }
        self.hermitian = true;
        Ok(self)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                worst = worst.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// True when every imaginary part is below `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| self.mat[(i, j)].im.abs() < tol))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|j| (0..n).all(|i| i == j || self.mat[(i, j)] == C64::new(0.0, 0.0)))
    }

    pub fn adjoint(&self) -> Self {
        Self { mat: self.mat.adjoint().to_owned(), hermitian: self.hermitian }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.mat[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max(self.mat[(i, j)].norm());
            }
        }
        worst
    }

    pub fn scale(&self, c: C64) -> Self {
        let hermitian = self.hermitian && c.im == 0.0;
        let n = self.dim();
        Self { mat: Mat::from_fn(n, n, |i, j| self.mat[(i, j)] * c), hermitian }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    /// Matrix–vector product.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>, QError> {
        let n = self.dim();
        if v.len() != n {
            return Err(QError::DimensionMismatch { expected: n, found: v.len() });
        }
        let mut out = vec![C64::new(0.0, 0.0); n];
        for (j, &vj) in v.iter().enumerate() {
            if vj == C64::new(0.0, 0.0) {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                *o += self.mat[(i, j)] * vj;
            }
        }
        Ok(out)
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator { mat: &self.mat + &rhs.mat, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator { mat: &self.mat - &rhs.mat, hermitian: self.hermitian && rhs.hermitian }
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim(), rhs.dim(), "operator dimension mismatch");
        Operator::from_mat(&self.mat * &rhs.mat)
    }
}

/// Kronecker product A ⊗ B with the default dimension guard.
pub fn tensor(a: &Operator, b: &Operator) -> Result<Operator, QError> {
    tensor_with_limit(a, b, DEFAULT_TENSOR_LIMIT)
}

/// Kronecker product A ⊗ B; index `(ia, ib)` maps to `ia * dim(B) + ib`.
pub fn tensor_with_limit(a: &Operator, b: &Operator, limit: usize) -> Result<Operator, QError> {
    let (da, db) = (a.dim(), b.dim());
    let dim = da
        .checked_mul(db)
        .ok_or(QError::DimensionTooLarge { dim: usize::MAX, limit })?;
    if dim > limit {
        return Err(QError::DimensionTooLarge { dim, limit });
    }
    let mut op = Operator::from_fn(dim, |i, j| a.get(i / db, j / db) * b.get(i % db, j % db));
    op.hermitian = a.hermitian && b.hermitian;
    Ok(op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn identity_tensor_identity() {
        let id = tensor(&Operator::identity(2), &Operator::identity(3)).unwrap();
        let diff = &id - &Operator::identity(6);
        assert_eq!(diff.max_abs(), 0.0);
    }

    #[test]
    fn tensor_trace_factorizes() {
        // Fixed pseudo-random entries; trace(A ⊗ B) evaluated directly from the
        // diagonal of the Kronecker product.
        let a = Operator::from_fn(3, |i, j| C64::new((i * 3 + j) as f64 * 0.37 - 1.1, (j as f64 - i as f64) * 0.21));
        let b = Operator::from_fn(3, |i, j| C64::new(((i + 2 * j) % 5) as f64 * 0.53, 0.1 * i as f64));
        let ab = tensor(&a, &b).unwrap();
        let lhs = ab.trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn tensor_guard() {
        let big = Operator::identity(200);
        assert!(matches!(
            tensor_with_limit(&big, &big, 1000),
            Err(QError::DimensionTooLarge { dim: 40_000, limit: 1000 })
        ));
    }

    #[test]
    fn hermitian_flag_is_verified() {
        let bad = Operator::from_rows(&[vec![c(0.0), c(1.0)], vec![c(0.0), c(0.0)]]);
        assert!(matches!(bad.into_hermitian(), Err(QError::NonHermitian { .. })));
        let good = Operator::from_rows(&[vec![c(1.0), C64::new(0.0, 2.0)], vec![C64::new(0.0, -2.0), c(-1.0)]]);
        assert!(good.into_hermitian().unwrap().is_flagged_hermitian());
    }

    #[test]
    fn apply_checks_dimension() {
        let op = Operator::identity(3);
        assert!(matches!(op.apply(&[c(1.0)]), Err(QError::DimensionMismatch { expected: 3, found: 1 })));
    }
}
