//! Spectral radius estimation via Gelfand's formula.
//!
//! The spectral radius of an iteration matrix decides convergence, but the
//! matrices here are small and generally non-normal, so instead of a full
//! eigensolver we use the limit `rho(G) = lim ||G^k||^(1/k)` evaluated along
//! the powers `k = 2^m` by repeated squaring. The iterate is renormalized at
//! every squaring and the norm is tracked in log scale, so powers never
//! overflow or underflow even for wildly divergent matrices.

use crate::linalg::dense::DenseMatrix;

/// Relative agreement between successive Gelfand estimates that stops the
/// squaring loop.
pub const GELFAND_RTOL: f64 = 1e-6;

/// Maximum number of squarings (`k` up to `2^24`).
pub const GELFAND_MAX_SQUARINGS: u32 = 24;

/// Estimates the spectral radius of a square matrix.
///
/// Squaring stops as soon as two successive estimates agree to
/// [`GELFAND_RTOL`] or after [`GELFAND_MAX_SQUARINGS`] squarings. Non-finite
/// input (or an estimate that escapes the representable range) yields
/// `f64::INFINITY` as an explicit divergence signal.
///
/// # Panics
///
/// Panics if `g` is not square.
pub fn spectral_radius(g: &DenseMatrix) -> f64 {
    assert!(g.is_square(), "spectral radius of a non-square matrix");
    if g.rows() == 0 {
        return 0.0;
    }
    if !g.all_finite() {
        return f64::INFINITY;
    }

    // Invariant: G^(2^m) = c * exp(log_scale).
    let mut c = g.clone();
    let mut log_scale = 0.0_f64;
    let mut estimate = c.frobenius_norm(); // m = 0: ||G||_F
    if estimate == 0.0 {
        return 0.0;
    }

    for m in 1..=GELFAND_MAX_SQUARINGS {
        let f = c.frobenius_norm();
        if f == 0.0 {
            // The power collapsed to zero: the matrix is nilpotent.
            return 0.0;
        }
        if !f.is_finite() {
            return f64::INFINITY;
        }
        let normalized = c.scaled(1.0 / f);
        c = normalized.matmul(&normalized);
        log_scale = 2.0 * (log_scale + f.ln());

        let fm = c.frobenius_norm();
        if fm == 0.0 {
            return 0.0;
        }
        let new_estimate = ((fm.ln() + log_scale) / f64::powi(2.0, m as i32)).exp();
        if !new_estimate.is_finite() {
            return f64::INFINITY;
        }
        if (new_estimate - estimate).abs() <= GELFAND_RTOL * new_estimate.max(f64::MIN_POSITIVE) {
            return new_estimate;
        }
        estimate = new_estimate;
    }
    estimate
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::Vector;
    use crate::test_util::rng;
    use rand::Rng;

    #[test]
    fn diagonal_matrix_radius_is_largest_magnitude_entry() {
        let g = DenseMatrix::from_rows(&[vec![0.5, 0.0], vec![0.0, -0.25]]);
        assert!((spectral_radius(&g) - 0.5).abs() <= 1e-6);
    }

    #[test]
    fn gauss_seidel_matrix_of_the_two_by_two_model() {
        let g = DenseMatrix::from_rows(&[vec![0.0, -0.5], vec![0.0, 0.25]]);
        assert!((spectral_radius(&g) - 0.25).abs() <= 1e-6);
    }

    #[test]
    fn zero_nilpotent_and_identity_matrices() {
        assert_eq!(spectral_radius(&DenseMatrix::zeros(3, 3)), 0.0);
        let nilpotent = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]);
        assert_eq!(spectral_radius(&nilpotent), 0.0);
        assert!((spectral_radius(&DenseMatrix::identity(4)) - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn divergent_residual_matrix_has_radius_two() {
        // I - A for A = [[2,1],[1,2]]: eigenvalues 0 and -2.
        let g = DenseMatrix::from_rows(&[vec![-1.0, -1.0], vec![-1.0, -1.0]]);
        assert!((spectral_radius(&g) - 2.0).abs() <= 1e-6);
    }

    #[test]
    fn non_finite_input_signals_divergence() {
        let g = DenseMatrix::from_rows(&[vec![f64::INFINITY]]);
        assert_eq!(spectral_radius(&g), f64::INFINITY);
    }

    #[test]
    fn huge_entries_yield_a_finite_estimate_instead_of_overflow() {
        let g = DenseMatrix::from_rows(&[vec![1e300, 0.0], vec![0.0, 1e299]]);
        let rho = spectral_radius(&g);
        assert!((rho - 1e300).abs() <= 1e-6 * 1e300);
    }

    #[test]
    fn triangular_matrices_match_their_diagonal() {
        let mut r = rng(17);
        let diags = [
            vec![0.9, 0.5, 0.3, -0.8],
            vec![2.0, -0.1, 1.2],
            vec![0.99, 0.01],
        ];
        for diag in diags {
            let n = diag.len();
            let g = DenseMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    diag[i]
                } else if i < j {
                    r.gen_range(-1.0..1.0)
                } else {
                    0.0
                }
            });
            let expected = Vector::from_vec(diag.clone()).norm_inf();
            let rho = spectral_radius(&g);
            assert!(
                (rho - expected).abs() <= 1e-6 * (1.0 + expected),
                "diag {diag:?}: rho {rho} vs {expected}"
            );
        }
    }
}
