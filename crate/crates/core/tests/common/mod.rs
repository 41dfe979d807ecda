//! Shared generators for the integration tests.

use dgsor::linalg::{DenseMatrix, SpdSystem, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric positive definite matrix: `F^T F + n I` for a random
/// square factor `F`. The shift keeps the smallest eigenvalue at least `n`.
pub fn random_spd_matrix(r: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let factor = DenseMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let mut a = factor.transpose().matmul(&factor);
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a
}

pub fn random_system(r: &mut ChaCha8Rng, n: usize) -> SpdSystem {
    let a = random_spd_matrix(r, n);
    let b = Vector::from_vec((0..n).map(|_| r.gen_range(-1.0..1.0)).collect());
    SpdSystem::new(a, b).expect("generated matrix is SPD")
}

/// The `n x n` second-difference matrix `tridiag(-1, 2, -1)` with a
/// right-hand side chosen so the solution is the all-ones vector.
pub fn tridiagonal_system(n: usize) -> SpdSystem {
    let a = DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    });
    let b = a.matvec(&Vector::ones(n));
    SpdSystem::new(a, b).expect("second-difference matrix is SPD")
}
