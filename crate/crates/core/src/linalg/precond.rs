//! SPD preconditioners used to define gradient systems and schemes.

use crate::error::Result;
use crate::linalg::dense::{DenseMatrix, Vector};
use crate::linalg::spd::{certify_spd, SpdSystem};
use crate::linalg::splitting::BlockSplitting;

/// A symmetric positive definite preconditioner `P`.
///
/// `Identity` and `JacobiInverse` (`D^{-1}`) resolve against the system they
/// are applied to; `BlockJacobiInverse` (`D_b^{-1}`) carries the block
/// splitting it inverts; `Explicit` wraps an arbitrary SPD matrix and should
/// be built through [`Preconditioner::explicit`], which certifies it.
#[derive(Debug, Clone)]
pub enum Preconditioner {
    /// `P = I`.
    Identity,
    /// `P = D^{-1}`, the inverse of the diagonal of `A`.
    JacobiInverse,
    /// `P = D_b^{-1}`, the inverse of a block diagonal of `A`.
    BlockJacobiInverse(BlockSplitting),
    /// An explicitly supplied SPD matrix.
    Explicit(DenseMatrix),
}

impl Preconditioner {
    /// Wraps an explicit matrix after certifying it is SPD.
    ///
    /// # Errors
    ///
    /// Propagates the certification failure (asymmetry, indefiniteness,
    /// non-finite entries).
    pub fn explicit(m: DenseMatrix) -> Result<Self> {
        certify_spd(&m)?;
        Ok(Self::Explicit(m))
    }

    /// Short display name used in error messages.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::JacobiInverse => "jacobi-inverse",
            Self::BlockJacobiInverse(_) => "block-jacobi-inverse",
            Self::Explicit(_) => "explicit",
        }
    }

    /// Applies `P` to a vector in the context of `system`.
    ///
    /// # Panics
    ///
    /// Panics if `v.len()` (or the stored block splitting / matrix) does not
    /// match the system dimension.
    pub fn apply(&self, system: &SpdSystem, v: &Vector) -> Vector {
        let n = system.n();
        assert_eq!(v.len(), n, "vector length mismatch");
        match self {
            Self::Identity => v.clone(),
            Self::JacobiInverse => {
                let a = system.a();
                Vector::from_vec((0..n).map(|i| v[i] / a[(i, i)]).collect())
            }
            Self::BlockJacobiInverse(bs) => {
                assert_eq!(bs.n(), n, "block splitting dimension mismatch");
                let mut out = Vector::zeros(n);
                for bi in 0..bs.block_count() {
                    let range = bs.range(bi);
                    let rhs =
                        Vector::from_vec(range.clone().map(|i| v[i]).collect());
                    let yi = bs.solve_block(bi, &rhs);
                    for (local, i) in range.enumerate() {
                        out[i] = yi[local];
                    }
                }
                out
            }
            Self::Explicit(m) => {
                assert_eq!(m.rows(), n, "explicit preconditioner dimension mismatch");
                m.matvec(v)
            }
        }
    }

    /// Materializes `P` as a dense matrix in the context of `system`.
    pub fn matrix(&self, system: &SpdSystem) -> DenseMatrix {
        let n = system.n();
        match self {
            Self::Identity => DenseMatrix::identity(n),
            Self::JacobiInverse => {
                let a = system.a();
                DenseMatrix::from_fn(n, n, |i, j| if i == j { 1.0 / a[(i, i)] } else { 0.0 })
            }
            Self::BlockJacobiInverse(bs) => {
                assert_eq!(bs.n(), n, "block splitting dimension mismatch");
                bs.block_jacobi_matrix()
            }
            Self::Explicit(m) => {
                assert_eq!(m.rows(), n, "explicit preconditioner dimension mismatch");
                m.clone()
            }
        }
    }
}
