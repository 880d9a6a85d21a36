//! Dense vectors and symmetric matrices sized for small quasi-Newton problems.
//!
//! `SymMatrix` keeps only the upper triangle, so `get(i, j) == get(j, i)` holds
//! by construction. `CholeskyFactor` certifies positive definiteness and is the
//! only route used to apply an inverse.

use std::fmt;
use std::ops::{Deref, DerefMut, Index};

use crate::error::{Error, Result};

/// Relative pivot threshold: a Cholesky pivot at or below
/// `PIVOT_TOL * max_diag` is reported as loss of positive definiteness.
pub const PIVOT_TOL: f64 = 1e-14;

#[derive(Clone, PartialEq, Default)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![0.0; n])
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Vector(vec![value; n])
    }

    /// Unit vector `e_i` of length `n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[i] = 1.0;
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }

    fn check_len(&self, other: &Vector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(())
    }

    /// Panics on length mismatch; use [`Vector::try_dot`] for a checked version.
    pub fn dot(&self, other: &Vector) -> f64 {
        assert_eq!(self.len(), other.len(), "dot: length mismatch");
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn try_dot(&self, other: &Vector) -> Result<f64> {
        self.check_len(other)?;
        Ok(self.dot(other))
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self += a * x`
    pub fn axpy(&mut self, a: f64, x: &Vector) {
        assert_eq!(self.len(), x.len(), "axpy: length mismatch");
        for (s, xi) in self.0.iter_mut().zip(&x.0) {
            *s += a * xi;
        }
    }

    pub fn scaled(&self, a: f64) -> Vector {
        Vector(self.0.iter().map(|v| a * v).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "add: length mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.len(), other.len(), "sub: length mismatch");
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + a * dir`, the trial point of a line search.
    pub fn offset(&self, a: f64, dir: &Vector) -> Vector {
        let mut out = self.clone();
        out.axpy(a, dir);
        out
    }
}

impl From<Vec<f64>> for Vector {
    fn from(v: Vec<f64>) -> Self {
        Vector(v)
    }
}

impl From<&[f64]> for Vector {
    fn from(v: &[f64]) -> Self {
        Vector(v.to_vec())
    }
}

impl<const N: usize> From<[f64; N]> for Vector {
    fn from(v: [f64; N]) -> Self {
        Vector(v.to_vec())
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl DerefMut for Vector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Symmetric matrix with packed upper-triangular storage.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    // column-packed upper triangle: (i, j) with i <= j lives at j*(j+1)/2 + i
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        SymMatrix {
            n,
            data: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, *d);
        }
        m
    }

    /// Builds from dense rows; fails unless the rows form an exactly symmetric square matrix.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: row.len(),
                });
            }
            for j in i..n {
                if row[j] != rows[j][i] {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    /// Symmetrizes a dense row-major square matrix as `(A + Aᵀ)/2`.
    pub fn from_dense_symmetrized(n: usize, dense: &[f64]) -> Self {
        assert_eq!(dense.len(), n * n);
        let mut m = Self::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                m.set(i, j, 0.5 * (dense[i * n + j] + dense[j * n + i]));
            }
        }
        m
    }

    #[inline]
    fn idx(i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        j * (j + 1) / 2 + i
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[Self::idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[Self::idx(i, j)] = v;
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn diagonal(&self) -> Vector {
        (0..self.n).map(|i| self.get(i, i)).collect::<Vec<_>>().into()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Infinity norm (max absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.n, v.len(), "mul_vec: dimension mismatch");
        let mut out = Vector::zeros(self.n);
        for i in 0..self.n {
            out[i] = (0..self.n).map(|j| self.get(i, j) * v[j]).sum();
        }
        out
    }

    pub fn try_mul_vec(&self, v: &Vector) -> Result<Vector> {
        if self.n != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        Ok(self.mul_vec(v))
    }

    /// `v' A v`
    pub fn quad_form(&self, v: &Vector) -> f64 {
        v.dot(&self.mul_vec(v))
    }

    pub fn scaled(&self, a: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|v| a * v).collect(),
        }
    }

    /// Elementwise `a * self + b * other`.
    pub fn lin_comb(&self, a: f64, other: &SymMatrix, b: f64) -> Result<SymMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        Ok(SymMatrix {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SymMatrix) -> Result<SymMatrix> {
        self.lin_comb(1.0, other, -1.0)
    }

    /// Returns `self + c * v vᵀ`.
    pub fn outer_rank1_update(&self, v: &Vector, c: f64) -> Result<SymMatrix> {
        if self.n != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: v.len(),
            });
        }
        if !c.is_finite() {
            return Err(Error::NonFinite(format!("rank-one coefficient {c}")));
        }
        let mut out = self.clone();
        for j in 0..self.n {
            for i in 0..=j {
                let idx = Self::idx(i, j);
                out.data[idx] += c * v[i] * v[j];
            }
        }
        Ok(out)
    }

    pub fn max_diag(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn cholesky(&self) -> Result<CholeskyFactor> {
        cholesky(self)
    }
}

impl Index<(usize, usize)> for SymMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[Self::idx(i, j)]
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

/// Lower-triangular `L` with `L Lᵀ = A` and a strictly positive diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct CholeskyFactor {
    n: usize,
    // dense row-major, upper part zero
    l: Vec<f64>,
}

/// Cholesky factorization with a relative pivot tolerance.
///
/// Fails when a pivot is `<= PIVOT_TOL * max(diag(A))`, or when `A` holds a
/// non-finite entry.
pub fn cholesky(a: &SymMatrix) -> Result<CholeskyFactor> {
    let n = a.order();
    if !a.is_finite() {
        return Err(Error::NonFinite("matrix entry".into()));
    }
    let threshold = PIVOT_TOL * a.max_diag().max(0.0);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d <= threshold || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(CholeskyFactor { n, l })
}

impl CholeskyFactor {
    pub fn order(&self) -> usize {
        self.n
    }

    /// Entry `L[i][j]` (zero above the diagonal).
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.l[i * self.n + j]
    }

    /// Solves `A x = b` by forward then backward substitution.
    pub fn solve(&self, b: &Vector) -> Result<Vector> {
        let n = self.n;
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: b.len(),
            });
        }
        let mut z = b.clone();
        for i in 0..n {
            let mut s = z[i];
            for k in 0..i {
                s -= self.l[i * n + k] * z[k];
            }
            z[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = z[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * z[k];
            }
            z[i] = s / self.l[i * n + i];
        }
        Ok(z)
    }

    /// `det(A) = (∏ L_ii)²`.
    pub fn determinant(&self) -> f64 {
        let p: f64 = (0..self.n).map(|i| self.l[i * self.n + i]).product();
        p * p
    }

    /// `ln det(A)`, computed from the diagonal logs so it does not overflow.
    pub fn log_determinant(&self) -> f64 {
        2.0 * (0..self.n).map(|i| self.l[i * self.n + i].ln()).sum::<f64>()
    }

    /// Explicit inverse via `n` solves against the unit vectors.
    pub fn inverse(&self) -> SymMatrix {
        let n = self.n;
        let mut dense = vec![0.0; n * n];
        for j in 0..n {
            let col = self
                .solve(&Vector::unit(n, j))
                .expect("unit vector has matching dimension");
            for i in 0..n {
                dense[i * n + j] = col[i];
            }
        }
        SymMatrix::from_dense_symmetrized(n, &dense)
    }

    /// `L Lᵀ`
    pub fn reconstruct(&self) -> SymMatrix {
        let n = self.n;
        let mut m = SymMatrix::zeros(n);
        for j in 0..n {
            for i in 0..=j {
                let s: f64 = (0..=i).map(|k| self.l[i * n + k] * self.l[j * n + k]).sum();
                m.set(i, j, s);
            }
        }
        m
    }
}

pub fn solve_spd(factor: &CholeskyFactor, b: &Vector) -> Result<Vector> {
    factor.solve(b)
}

pub fn determinant_spd(factor: &CholeskyFactor) -> f64 {
    factor.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(r: &[&[f64]]) -> SymMatrix {
        SymMatrix::from_rows(&r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn cholesky_identity_and_diagonal() {
        let l = cholesky(&SymMatrix::identity(2)).unwrap();
        assert_eq!(l.reconstruct(), SymMatrix::identity(2));
        assert_eq!(l.entry(0, 0), 1.0);
        assert_eq!(l.entry(1, 0), 0.0);

        let l = cholesky(&SymMatrix::from_diag(&[4.0, 9.0])).unwrap();
        assert_eq!(l.entry(0, 0), 2.0);
        assert_eq!(l.entry(1, 1), 3.0);
        assert_eq!(l.entry(1, 0), 0.0);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        // eigenvalues 3 and -1
        let a = rows(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(cholesky(&a), Err(Error::NotPositiveDefinite { index: 1, .. })));
    }

    #[test]
    fn cholesky_pivot_tolerance_is_relative() {
        // second pivot is exactly zero up to rounding
        let a = rows(&[&[1e6, 1e6], &[1e6, 1e6]]);
        assert!(cholesky(&a).is_err());
        assert!(cholesky(&SymMatrix::zeros(3)).is_err());
        let a = SymMatrix::from_diag(&[1.0, 1e-13]);
        assert!(cholesky(&a).is_ok());
        let a = SymMatrix::from_diag(&[1.0, 1e-15]);
        assert!(cholesky(&a).is_err());
    }

    #[test]
    fn cholesky_rejects_non_finite() {
        let a = SymMatrix::from_diag(&[1.0, f64::NAN]);
        assert!(matches!(cholesky(&a), Err(Error::NonFinite(_))));
    }

    #[test]
    fn solve_examples() {
        let l = cholesky(&SymMatrix::identity(3)).unwrap();
        assert_eq!(l.solve(&Vector::from([1.0, 2.0, 3.0])).unwrap(), Vector::from([1.0, 2.0, 3.0]));

        let l = cholesky(&SymMatrix::from_diag(&[2.0, 4.0])).unwrap();
        let x = l.solve(&Vector::from([2.0, 4.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15, "{x:?}");

        let a = rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let x = cholesky(&a).unwrap().solve(&Vector::from([3.0, 3.0])).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn solve_dimension_mismatch() {
        let l = cholesky(&SymMatrix::identity(3)).unwrap();
        assert!(matches!(
            l.solve(&Vector::zeros(2)),
            Err(Error::DimensionMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn determinant_examples() {
        assert_eq!(determinant_spd(&cholesky(&SymMatrix::identity(3)).unwrap()), 1.0);
        let d = determinant_spd(&cholesky(&SymMatrix::from_diag(&[2.0, 3.0])).unwrap());
        assert!((d - 6.0).abs() < 1e-14);
        let d = determinant_spd(&cholesky(&rows(&[&[2.0, 1.0], &[1.0, 2.0]])).unwrap());
        assert!((d - 3.0).abs() < 1e-14);
        let f = cholesky(&SymMatrix::from_diag(&[2.0, 3.0])).unwrap();
        assert!((f.log_determinant() - 6f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rank1_update_examples() {
        let a = SymMatrix::zeros(2).outer_rank1_update(&Vector::from([1.0, 0.0]), 2.0).unwrap();
        assert_eq!(a, SymMatrix::from_diag(&[2.0, 0.0]));

        let a = SymMatrix::identity(2).outer_rank1_update(&Vector::from([1.0, 1.0]), 1.0).unwrap();
        assert_eq!(a, rows(&[&[2.0, 1.0], &[1.0, 2.0]]));

        let a = SymMatrix::from_diag(&[1.0, 2.0])
            .outer_rank1_update(&Vector::from([1.0, 2.0]), -0.5)
            .unwrap();
        assert_eq!(a, rows(&[&[0.5, -1.0], &[-1.0, 0.0]]));

        assert!(SymMatrix::identity(2).outer_rank1_update(&Vector::zeros(3), 1.0).is_err());
    }

    #[test]
    fn from_rows_rejects_asymmetric() {
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 1.0]]).is_err());
        assert!(SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0]]).is_err());
    }

    #[test]
    fn symmetric_storage_is_single() {
        let mut a = SymMatrix::zeros(3);
        a.set(2, 0, 5.0);
        assert_eq!(a.get(0, 2), 5.0);
        assert_eq!(a[(2, 0)], 5.0);
    }

    #[test]
    fn vector_helpers() {
        let a = Vector::from([3.0, 4.0]);
        assert_eq!(a.norm(), 5.0);
        assert_eq!(a.norm_inf(), 4.0);
        assert_eq!(a.offset(2.0, &Vector::from([1.0, -1.0])), Vector::from([5.0, 2.0]));
        assert!(a.try_dot(&Vector::zeros(3)).is_err());
        let m = SymMatrix::from_diag(&[1.0, 2.0]);
        assert_eq!(m.trace(), 3.0);
        assert_eq!(m.quad_form(&a), 9.0 + 32.0);
        assert!(m.try_mul_vec(&Vector::zeros(3)).is_err());
    }
}
