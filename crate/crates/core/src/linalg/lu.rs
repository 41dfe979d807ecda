//! LU factorization with partial pivoting for small dense systems.

use crate::error::{Error, Result};
use crate::linalg::dense::{DenseMatrix, Vector};

/// Relative pivot threshold below which elimination declares singularity.
///
/// A pivot is compared against `PIVOT_RTOL * max_abs(original matrix)`, so
/// the test is invariant under uniform scaling of the system.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Compact LU factorization `P * m = L * U` of a square matrix.
///
/// `L` (unit lower triangular) and `U` share the `lu` buffer; `perm` stores
/// the row permutation applied by partial pivoting.
#[derive(Debug, Clone)]
pub struct LuFactors {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl LuFactors {
    /// Factorizes `m` with partial pivoting.
    ///
    /// # Errors
    ///
    /// Returns [`Error::NotSquare`] for rectangular input and
    /// [`Error::Singular`] when the largest available pivot in some column
    /// falls below `PIVOT_RTOL * max_abs(m)`.
    pub fn factor(m: &DenseMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        let threshold = PIVOT_RTOL * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            // Pick the row with the largest entry in column k.
            let mut pivot_row = k;
            let mut pivot_mag = lu[(k, k)].abs();
            for i in k + 1..n {
                let mag = lu[(i, k)].abs();
                if mag > pivot_mag {
                    pivot_mag = mag;
                    pivot_row = i;
                }
            }
            if pivot_mag < threshold || pivot_mag == 0.0 {
                return Err(Error::Singular {
                    column: k,
                    pivot: pivot_mag,
                });
            }
            if pivot_row != k {
                swap_rows(&mut lu, k, pivot_row);
                perm.swap(k, pivot_row);
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let factor = lu[(i, k)] / pivot;
                lu[(i, k)] = factor;
                for j in k + 1..n {
                    let upd = factor * lu[(k, j)];
                    lu[(i, j)] -= upd;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    /// Dimension of the factored matrix.
    pub fn n(&self) -> usize {
        self.lu.rows()
    }

    /// Solves `m * y = rhs` using the stored factors.
    ///
    /// # Panics
    ///
    /// Panics if `rhs.len()` does not match the factored dimension.
    pub fn solve(&self, rhs: &Vector) -> Vector {
        let n = self.n();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        // Apply the permutation, then unit-lower forward substitution.
        let mut y = Vector::from_vec(self.perm.iter().map(|&p| rhs[p]).collect());
        for i in 0..n {
            let mut acc = y[i];
            for j in 0..i {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc;
        }
        // Upper back substitution.
        for i in (0..n).rev() {
            let mut acc = y[i];
            for j in i + 1..n {
                acc -= self.lu[(i, j)] * y[j];
            }
            y[i] = acc / self.lu[(i, i)];
        }
        y
    }

    /// Solves `m * Y = B` column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        assert_eq!(b.rows(), self.n(), "rhs row count mismatch");
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let col = self.solve(&b.column(j));
            out.set_column(j, &col);
        }
        out
    }
}

/// Solves the square system `m * y = rhs` by pivoted LU elimination.
///
/// # Errors
///
/// Returns [`Error::Singular`] when elimination cannot find an acceptable
/// pivot, and [`Error::NotSquare`] for rectangular `m`.
pub fn lu_solve(m: &DenseMatrix, rhs: &Vector) -> Result<Vector> {
    if m.is_square() && m.rows() != rhs.len() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: rhs.len(),
        });
    }
    Ok(LuFactors::factor(m)?.solve(rhs))
}

fn swap_rows(m: &mut DenseMatrix, a: usize, b: usize) {
    for j in 0..m.cols() {
        let tmp = m[(a, j)];
        m[(a, j)] = m[(b, j)];
        m[(b, j)] = tmp;
    }
}
