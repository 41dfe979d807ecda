//! Pointwise and block splittings `A = D + L + U`.
//!
//! Sweep-based solvers and their iteration matrices are all assembled from
//! the same decomposition of the system matrix into a diagonal part, a
//! strictly lower part and a strictly upper part — either entrywise
//! ([`Splitting`]) or with respect to a contiguous block partition
//! ([`BlockSplitting`]). Both keep plain copies of the parts so that
//! `D + L + U` reproduces `A` bit for bit, and both provide the scaled
//! triangular solves `(G + beta*L) y = r` that the solver modules share.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::linalg::dense::{DenseMatrix, Vector};
use crate::linalg::lu::LuFactors;
use crate::linalg::spd::SpdSystem;

/// Entrywise splitting of an SPD matrix into `D + L + U`.
#[derive(Debug, Clone)]
pub struct Splitting {
    d: Vector,
    l: DenseMatrix,
    u: DenseMatrix,
}

impl SpdSystem {
    /// Splits the system matrix into diagonal, strictly lower and strictly
    /// upper parts.
    pub fn split(&self) -> Splitting {
        let n = self.n();
        let a = self.a();
        let mut l = DenseMatrix::zeros(n, n);
        let mut u = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if i > j {
                    l[(i, j)] = a[(i, j)];
                } else if i < j {
                    u[(i, j)] = a[(i, j)];
                }
            }
        }
        Splitting {
            d: a.diagonal(),
            l,
            u,
        }
    }

    /// Splits the system matrix along a contiguous block partition.
    ///
    /// `boundaries` lists the interior cut points in increasing order: for
    /// `n = 4`, `boundaries = [2]` produces the two blocks `0..2` and `2..4`,
    /// an empty list produces a single block, and `[1, 2, 3]` produces
    /// singletons.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidPartition`] when the cut points are not
    /// strictly increasing inside `(0, n)`, and [`Error::SingularBlock`]
    /// when a diagonal block cannot be factorized.
    pub fn block_split(&self, boundaries: &[usize]) -> Result<BlockSplitting> {
        BlockSplitting::new(self, boundaries)
    }
}

impl Splitting {
    /// Diagonal of `A` as a vector.
    pub fn d(&self) -> &Vector {
        &self.d
    }

    /// Strictly lower part of `A`.
    pub fn l(&self) -> &DenseMatrix {
        &self.l
    }

    /// Strictly upper part of `A`.
    pub fn u(&self) -> &DenseMatrix {
        &self.u
    }

    /// Dimension of the split matrix.
    pub fn n(&self) -> usize {
        self.d.len()
    }

    /// `diag(d)` as a dense matrix.
    pub fn d_matrix(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = self.d[i];
        }
        m
    }

    /// Reassembles `D + L + U`.
    pub fn reassemble(&self) -> DenseMatrix {
        let mut m = self.l.add(&self.u);
        for i in 0..self.n() {
            m[(i, i)] += self.d[i];
        }
        m
    }

    /// Solves `(diag(g) + beta * L) y = rhs` by forward substitution.
    ///
    /// # Panics
    ///
    /// Panics if a diagonal entry of `g` is zero or the lengths mismatch.
    pub fn solve_lower(&self, g: &Vector, beta: f64, rhs: &Vector) -> Vector {
        let n = self.n();
        assert_eq!(g.len(), n, "diagonal length mismatch");
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut y = Vector::zeros(n);
        for i in 0..n {
            let mut acc = rhs[i];
            let row = self.l.row(i);
            for j in 0..i {
                acc -= beta * row[j] * y[j];
            }
            assert!(g[i] != 0.0, "zero diagonal in triangular solve");
            y[i] = acc / g[i];
        }
        y
    }

    /// Solves `(diag(g) + beta * U) y = rhs` by backward substitution.
    pub fn solve_upper(&self, g: &Vector, beta: f64, rhs: &Vector) -> Vector {
        let n = self.n();
        assert_eq!(g.len(), n, "diagonal length mismatch");
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        let mut y = Vector::zeros(n);
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            let row = self.u.row(i);
            for j in i + 1..n {
                acc -= beta * row[j] * y[j];
            }
            assert!(g[i] != 0.0, "zero diagonal in triangular solve");
            y[i] = acc / g[i];
        }
        y
    }

    /// Column-by-column version of [`Splitting::solve_lower`].
    pub fn solve_lower_matrix(&self, g: &Vector, beta: f64, rhs: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            out.set_column(j, &self.solve_lower(g, beta, &rhs.column(j)));
        }
        out
    }

    /// Column-by-column version of [`Splitting::solve_upper`].
    pub fn solve_upper_matrix(&self, g: &Vector, beta: f64, rhs: &DenseMatrix) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            out.set_column(j, &self.solve_upper(g, beta, &rhs.column(j)));
        }
        out
    }
}

/// Block splitting of an SPD matrix along a contiguous partition.
///
/// Diagonal blocks keep a cached LU factorization so that repeated block
/// solves inside sweeps stay cheap.
#[derive(Debug, Clone)]
pub struct BlockSplitting {
    boundaries: Vec<usize>,
    starts: Vec<usize>,
    block_mats: Vec<DenseMatrix>,
    block_lus: Vec<LuFactors>,
    lb: DenseMatrix,
    ub: DenseMatrix,
}

impl BlockSplitting {
    fn new(system: &SpdSystem, boundaries: &[usize]) -> Result<Self> {
        let n = system.n();
        let mut starts = Vec::with_capacity(boundaries.len() + 2);
        starts.push(0);
        for &b in boundaries {
            let last = *starts.last().expect("starts is non-empty");
            if b <= last || b >= n {
                return Err(Error::InvalidPartition {
                    reason: format!(
                        "cut points must be strictly increasing inside (0, {n}), got {boundaries:?}"
                    ),
                });
            }
            starts.push(b);
        }
        starts.push(n);

        let a = system.a();
        let p = starts.len() - 1;
        let mut block_mats = Vec::with_capacity(p);
        let mut block_lus = Vec::with_capacity(p);
        let mut lb = DenseMatrix::zeros(n, n);
        let mut ub = DenseMatrix::zeros(n, n);
        for bi in 0..p {
            let range = starts[bi]..starts[bi + 1];
            let block = submatrix(a, range.clone(), range.clone());
            let lu = LuFactors::factor(&block)
                .map_err(|_| Error::SingularBlock { index: bi })?;
            block_mats.push(block);
            block_lus.push(lu);
            for i in range.clone() {
                for j in 0..starts[bi] {
                    lb[(i, j)] = a[(i, j)];
                }
                for j in starts[bi + 1]..n {
                    ub[(i, j)] = a[(i, j)];
                }
            }
        }
        Ok(Self {
            boundaries: boundaries.to_vec(),
            starts,
            block_mats,
            block_lus,
            lb,
            ub,
        })
    }

    /// Number of blocks `p`.
    pub fn block_count(&self) -> usize {
        self.starts.len() - 1
    }

    /// Dimension of the split matrix.
    pub fn n(&self) -> usize {
        *self.starts.last().expect("starts is non-empty")
    }

    /// The interior cut points this splitting was built from.
    pub fn boundaries(&self) -> &[usize] {
        &self.boundaries
    }

    /// Index range of block `i`.
    pub fn range(&self, i: usize) -> Range<usize> {
        self.starts[i]..self.starts[i + 1]
    }

    /// Diagonal block `A_ii`.
    pub fn block(&self, i: usize) -> &DenseMatrix {
        &self.block_mats[i]
    }

    /// Strictly lower block part `L_b`.
    pub fn lb(&self) -> &DenseMatrix {
        &self.lb
    }

    /// Strictly upper block part `U_b`.
    pub fn ub(&self) -> &DenseMatrix {
        &self.ub
    }

    /// Whether `other` partitions the same index range identically.
    pub fn same_partition(&self, other: &BlockSplitting) -> bool {
        self.starts == other.starts
    }

    /// Block diagonal `D_b` assembled as a dense matrix.
    pub fn d_matrix(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for bi in 0..self.block_count() {
            let range = self.range(bi);
            let block = &self.block_mats[bi];
            for (bi_row, i) in range.clone().enumerate() {
                for (bi_col, j) in range.clone().enumerate() {
                    m[(i, j)] = block[(bi_row, bi_col)];
                }
            }
        }
        m
    }

    /// Reassembles `D_b + L_b + U_b`.
    pub fn reassemble(&self) -> DenseMatrix {
        self.d_matrix().add(&self.lb).add(&self.ub)
    }

    /// Solves `A_ii y_i = rhs_i` for block `i` using the cached factors.
    pub fn solve_block(&self, i: usize, rhs: &Vector) -> Vector {
        self.block_lus[i].solve(rhs)
    }

    /// `blockdiag(A_ii^{-1})` assembled as a dense matrix.
    pub fn block_jacobi_matrix(&self) -> DenseMatrix {
        let n = self.n();
        let mut m = DenseMatrix::zeros(n, n);
        for bi in 0..self.block_count() {
            let range = self.range(bi);
            let k = range.len();
            let inv = self.block_lus[bi].solve_matrix(&DenseMatrix::identity(k));
            for (bi_row, i) in range.clone().enumerate() {
                for (bi_col, j) in range.clone().enumerate() {
                    m[(i, j)] = inv[(bi_row, bi_col)];
                }
            }
        }
        m
    }

    /// Solves `(alpha * D_b + beta * L_b) y = rhs` by block forward
    /// substitution.
    pub fn solve_block_lower(&self, alpha: f64, beta: f64, rhs: &Vector) -> Vector {
        let n = self.n();
        assert_eq!(rhs.len(), n, "rhs length mismatch");
        assert!(alpha != 0.0, "zero diagonal scale in block solve");
        let mut y = Vector::zeros(n);
        for bi in 0..self.block_count() {
            let range = self.range(bi);
            let mut r = Vector::zeros(range.len());
            for (local, i) in range.clone().enumerate() {
                let mut acc = rhs[i];
                let row = self.lb.row(i);
                for j in 0..range.start {
                    acc -= beta * row[j] * y[j];
                }
                r[local] = acc;
            }
            let yi = self.block_lus[bi].solve(&r);
            for (local, i) in range.enumerate() {
                y[i] = yi[local] / alpha;
            }
        }
        y
    }

    /// Column-by-column version of [`BlockSplitting::solve_block_lower`].
    pub fn solve_block_lower_matrix(
        &self,
        alpha: f64,
        beta: f64,
        rhs: &DenseMatrix,
    ) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(rhs.rows(), rhs.cols());
        for j in 0..rhs.cols() {
            out.set_column(j, &self.solve_block_lower(alpha, beta, &rhs.column(j)));
        }
        out
    }
}

fn submatrix(a: &DenseMatrix, rows: Range<usize>, cols: Range<usize>) -> DenseMatrix {
    DenseMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        a[(rows.start + i, cols.start + j)]
    })
}
