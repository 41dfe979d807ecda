//! Built-in problem families and right-hand-side construction.

use std::path::{Path, PathBuf};

use dgsor::linalg::{DenseMatrix, SpdSystem, Vector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CliError, Result};
use crate::matrix_market;

/// The generated matrix families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    /// `tridiag(-1, 2, -1)` of order `n`: the 1-d second-difference matrix.
    Laplacian1d,
    /// Five-point stencil on an `m x m` grid (order `m^2`).
    Laplacian2d,
    /// `F^T F + n I` for a random square factor `F`; the shift keeps the
    /// smallest eigenvalue at least `n`.
    RandomSpd,
}

/// How the right-hand side is chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhsChoice {
    /// `b = A * ones`, so the exact solution is the all-ones vector.
    OnesSolution,
    /// Uniform entries in `(-1, 1)` from the run's seeded generator.
    Random,
    /// Loaded from a Matrix Market file.
    File(PathBuf),
}

pub fn laplacian1d(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            -1.0
        } else {
            0.0
        }
    })
}

pub fn laplacian2d(m: usize) -> DenseMatrix {
    let n = m * m;
    DenseMatrix::from_fn(n, n, |p, q| {
        if p == q {
            4.0
        } else if p.abs_diff(q) == 1 && p / m == q / m {
            -1.0 // horizontal neighbor on the same grid row
        } else if p.abs_diff(q) == m {
            -1.0 // vertical neighbor
        } else {
            0.0
        }
    })
}

pub fn random_spd(n: usize, rng: &mut ChaCha8Rng) -> DenseMatrix {
    let factor = DenseMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let mut a = factor.transpose().matmul(&factor);
    for i in 0..n {
        a[(i, i)] += n as f64;
    }
    a
}

/// Builds the matrix of a generated family. `size` is the matrix order,
/// except for [`Generator::Laplacian2d`] where it is the grid side.
pub fn generate_matrix(kind: Generator, size: usize, rng: &mut ChaCha8Rng) -> Result<DenseMatrix> {
    if size == 0 {
        return Err(CliError::usage("problem size must be at least 1"));
    }
    Ok(match kind {
        Generator::Laplacian1d => laplacian1d(size),
        Generator::Laplacian2d => laplacian2d(size),
        Generator::RandomSpd => random_spd(size, rng),
    })
}

/// Builds the right-hand side for a given matrix. The random choice draws
/// from the same generator that produced the matrix, so a seed pins down
/// the whole problem.
pub fn build_rhs(a: &DenseMatrix, choice: &RhsChoice, rng: &mut ChaCha8Rng) -> Result<Vector> {
    Ok(match choice {
        RhsChoice::OnesSolution => a.matvec(&Vector::ones(a.cols())),
        RhsChoice::Random => {
            Vector::from_vec((0..a.rows()).map(|_| rng.gen_range(-1.0..1.0)).collect())
        }
        RhsChoice::File(path) => matrix_market::read_vector_file(path)?,
    })
}

/// Generates a full certified system from a built-in family.
pub fn generate_system(
    kind: Generator,
    size: usize,
    rhs: &RhsChoice,
    seed: u64,
) -> Result<SpdSystem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = generate_matrix(kind, size, &mut rng)?;
    let b = build_rhs(&a, rhs, &mut rng)?;
    Ok(SpdSystem::new(a, b)?)
}

/// Loads a certified system from Matrix Market files. Without a right-hand
/// side the ones-solution default applies: `b = A * ones`.
pub fn load_system(matrix: &Path, rhs: Option<&RhsChoice>) -> Result<SpdSystem> {
    let a = matrix_market::read_matrix_file(matrix)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let b = match rhs {
        Some(choice) => build_rhs(&a, choice, &mut rng)?,
        None => a.matvec(&Vector::ones(a.cols())),
    };
    Ok(SpdSystem::new(a, b)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_laplacian_is_the_second_difference_matrix() {
        let a = laplacian1d(3);
        let expected = DenseMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![-1.0, 2.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn two_dimensional_laplacian_on_the_two_by_two_grid() {
        let a = laplacian2d(2);
        let expected = DenseMatrix::from_rows(&[
            vec![4.0, -1.0, -1.0, 0.0],
            vec![-1.0, 4.0, 0.0, -1.0],
            vec![-1.0, 0.0, 4.0, -1.0],
            vec![0.0, -1.0, -1.0, 4.0],
        ]);
        assert_eq!(a, expected);
    }

    #[test]
    fn two_dimensional_laplacian_does_not_couple_across_grid_rows() {
        let a = laplacian2d(3);
        // Nodes 2 and 3 are adjacent in index but sit on different grid rows.
        assert_eq!(a[(2, 3)], 0.0);
        assert_eq!(a[(3, 2)], 0.0);
    }

    #[test]
    fn random_spd_matrices_are_certified_and_seed_deterministic() {
        let sys1 = generate_system(Generator::RandomSpd, 7, &RhsChoice::Random, 42).unwrap();
        let sys2 = generate_system(Generator::RandomSpd, 7, &RhsChoice::Random, 42).unwrap();
        assert_eq!(sys1.a(), sys2.a());
        assert_eq!(sys1.b().as_slice(), sys2.b().as_slice());
        let other = generate_system(Generator::RandomSpd, 7, &RhsChoice::Random, 43).unwrap();
        assert_ne!(sys1.a(), other.a());
    }

    #[test]
    fn ones_solution_rhs_makes_the_all_ones_vector_exact() {
        let sys =
            generate_system(Generator::Laplacian2d, 3, &RhsChoice::OnesSolution, 0).unwrap();
        assert_eq!(sys.n(), 9);
        let err = sys.solution().sub(&Vector::ones(9)).norm_inf();
        assert!(err <= 1e-12, "solution error {err:e}");
    }

    #[test]
    fn zero_size_is_a_usage_error() {
        assert!(matches!(
            generate_system(Generator::Laplacian1d, 0, &RhsChoice::OnesSolution, 0),
            Err(CliError::Usage(_))
        ));
    }
}
