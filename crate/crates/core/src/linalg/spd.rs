//! Symmetric positive definite systems and their certification.
//!
//! A [`SpdSystem`] bundles the matrix `A`, the right-hand side `b` and a
//! Cholesky factorization computed once at construction time. The
//! factorization doubles as the SPD certificate (it exists iff the matrix is
//! positive definite) and as an exact-solution oracle `A^{-1} b` against
//! which iterative methods are compared.

use crate::error::{Error, Result};
use crate::linalg::dense::{DenseMatrix, Vector};

/// Computes the lower Cholesky factor `L` with `m = L * L^T`.
///
/// The input must already be square, finite and exactly symmetric; this
/// routine only checks positive definiteness (via the sign of each pivot).
///
/// # Errors
///
/// Returns [`Error::NotPositiveDefinite`] when a pivot is not strictly
/// positive.
pub fn cholesky(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.rows();
    let mut l = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return Err(Error::NotPositiveDefinite { index: i, pivot: s });
                }
                l[(i, j)] = s.sqrt();
            } else {
                l[(i, j)] = s / l[(j, j)];
            }
        }
    }
    Ok(l)
}

/// Checks that `m` is square, finite, exactly symmetric and positive
/// definite, returning its lower Cholesky factor as the certificate.
///
/// Symmetry is required bit-for-bit (`m[i][j] == m[j][i]` as stored), so
/// matrices assembled from independent floating-point sums for the two
/// triangles are rejected rather than silently symmetrized.
pub fn certify_spd(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.all_finite() {
        return Err(Error::NonFinite);
    }
    for i in 0..m.rows() {
        for j in i + 1..m.cols() {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::NotSymmetric { i, j });
            }
        }
    }
    cholesky(m)
}

/// A linear system `A x = b` with SPD matrix, certified at construction.
#[derive(Debug, Clone)]
pub struct SpdSystem {
    a: DenseMatrix,
    b: Vector,
    chol: DenseMatrix,
    solution: Vector,
}

impl SpdSystem {
    /// Builds a system after certifying that `a` is SPD.
    ///
    /// # Errors
    ///
    /// Returns [`Error::NotSquare`], [`Error::NonFinite`],
    /// [`Error::NotSymmetric`] or [`Error::NotPositiveDefinite`] when the
    /// matrix fails certification, and [`Error::DimensionMismatch`] when
    /// `b.len() != n`.
    pub fn new(a: DenseMatrix, b: Vector) -> Result<Self> {
        let chol = certify_spd(&a)?;
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: b.len(),
            });
        }
        if !b.all_finite() {
            return Err(Error::NonFinite);
        }
        let solution = chol_solve(&chol, &b);
        Ok(Self {
            a,
            b,
            chol,
            solution,
        })
    }

    /// Dimension of the system.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// The SPD matrix `A`.
    pub fn a(&self) -> &DenseMatrix {
        &self.a
    }

    /// The right-hand side `b`.
    pub fn b(&self) -> &Vector {
        &self.b
    }

    /// The direct solution `A^{-1} b`, computed once via Cholesky.
    pub fn solution(&self) -> &Vector {
        &self.solution
    }

    /// Solves `A y = rhs` with the cached Cholesky factor.
    pub fn solve(&self, rhs: &Vector) -> Vector {
        assert_eq!(rhs.len(), self.n(), "rhs length mismatch");
        chol_solve(&self.chol, rhs)
    }
}

/// Solves `L L^T y = rhs` given the lower factor `L`.
fn chol_solve(l: &DenseMatrix, rhs: &Vector) -> Vector {
    let n = l.rows();
    let mut y = rhs.clone();
    for i in 0..n {
        let mut acc = y[i];
        for j in 0..i {
            acc -= l[(i, j)] * y[j];
        }
        y[i] = acc / l[(i, i)];
    }
    for i in (0..n).rev() {
        let mut acc = y[i];
        for j in i + 1..n {
            acc -= l[(j, i)] * y[j];
        }
        y[i] = acc / l[(i, i)];
    }
    y
}
