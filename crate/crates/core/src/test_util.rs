//! Shared helpers for the unit tests: deterministic random SPD instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{DenseMatrix, SpdSystem, Vector};

/// Deterministic RNG for reproducible test instances.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random SPD matrix `R^T R + n I`: exactly symmetric by construction and
/// comfortably well conditioned (smallest eigenvalue at least `n`).
pub fn random_spd_matrix(r: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
    let factor = DenseMatrix::from_fn(n, n, |_, _| r.gen_range(-1.0..1.0));
    let mut a = factor.transpose().matmul(&factor);
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a
}

/// Random vector with entries uniform in `lo..hi`.
pub fn random_vector(r: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vector {
    Vector::from_vec((0..n).map(|_| r.gen_range(lo..hi)).collect())
}

/// Random SPD system with a random right-hand side.
pub fn random_system(r: &mut ChaCha8Rng, n: usize) -> SpdSystem {
    let a = random_spd_matrix(r, n);
    let b = random_vector(r, n, -1.0, 1.0);
    SpdSystem::new(a, b).expect("construction is SPD")
}
