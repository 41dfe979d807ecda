//! Exact solution of the preconditioned gradient flow.
//!
//! For the quadratic energy behind an SPD system, the flow
//! `dx/dt = -P (A x - b)` has the closed-form solution
//! `x(t) = exp(-P A t) (x0 - A^{-1} b) + A^{-1} b`. This module evaluates
//! that formula with a dense matrix exponential (scaling and squaring with a
//! truncated Taylor series) and serves as the continuous-time oracle that
//! discrete schemes are checked against.

use crate::linalg::dense::{DenseMatrix, Vector};
use crate::linalg::precond::Preconditioner;
use crate::linalg::spd::SpdSystem;

/// Truncation threshold for Taylor terms of the scaled exponential. The
/// scaled argument has norm at most 1/4, so terms decay factorially and the
/// accumulated error stays below 1e-12 even after the squaring phase.
const EXPM_TERM_TOL: f64 = 1e-16;

/// Hard cap on Taylor terms; with the argument scaled below 1/4 the loop
/// terminates long before this.
const EXPM_MAX_TERMS: usize = 64;

/// Computes the matrix exponential `exp(m)` by scaling and squaring.
///
/// # Panics
///
/// Panics if `m` is not square or contains non-finite entries.
pub fn matrix_exp(m: &DenseMatrix) -> DenseMatrix {
    assert!(m.is_square(), "matrix exponential of a non-square matrix");
    assert!(m.all_finite(), "matrix exponential of non-finite input");
    let n = m.rows();
    if n == 0 {
        return DenseMatrix::zeros(0, 0);
    }

    // Scale until the norm is at most 1/4, run the Taylor series, then undo
    // the scaling by repeated squaring.
    let norm = m.frobenius_norm();
    let mut squarings = 0u32;
    while norm / f64::powi(2.0, squarings as i32) > 0.25 {
        squarings += 1;
    }
    let scaled = m.scaled(f64::powi(2.0, -(squarings as i32)));

    let mut result = DenseMatrix::identity(n);
    let mut term = DenseMatrix::identity(n);
    for k in 1..=EXPM_MAX_TERMS {
        term = term.matmul(&scaled).scaled(1.0 / k as f64);
        result = result.add(&term);
        if term.max_abs() <= EXPM_TERM_TOL {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// Evaluates the exact gradient-flow trajectory at time `t`.
///
/// Returns `exp(-P A t) (x0 - A^{-1} b) + A^{-1} b`, using the direct
/// solution cached in `system`. `t = 0` returns `x0` unchanged.
///
/// # Panics
///
/// Panics if `t` is negative or non-finite, or if `x0` has the wrong length.
pub fn exact_flow(system: &SpdSystem, p: &Preconditioner, x0: &Vector, t: f64) -> Vector {
    assert!(t.is_finite() && t >= 0.0, "time must be finite and nonnegative");
    assert_eq!(x0.len(), system.n(), "x0 length mismatch");
    if t == 0.0 {
        return x0.clone();
    }
    let xstar = system.solution();
    let pa = p.matrix(system).matmul(system.a());
    let e = matrix_exp(&pa.scaled(-t));
    e.matvec(&x0.sub(xstar)).add(xstar)
}
