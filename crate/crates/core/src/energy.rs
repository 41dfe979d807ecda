//! The quadratic energy `f(x) = x'Ax/2 - x'b` and its gradient.
//!
//! Every solver in this crate is judged against this function: the SPD
//! system's solution is its unique minimizer, the residual `Ax - b` is its
//! gradient, and the sweep-based schemes decrease it one component at a
//! time. [`component_decrement`] gives the closed form of that one-component
//! energy change for the diagonally preconditioned forward sweep, which is
//! what makes the optimal-stepsize analysis testable.

use crate::error::{Error, Result};
use crate::linalg::{SpdSystem, Vector};

/// Evaluates `f(x) = x'Ax/2 - x'b`.
///
/// # Errors
///
/// Returns [`Error::DimensionMismatch`] if `x.len() != n`.
pub fn energy(system: &SpdSystem, x: &Vector) -> Result<f64> {
    check_len(system, x)?;
    let ax = system.a().matvec(x);
    Ok(0.5 * x.dot(&ax) - x.dot(system.b()))
}

/// Evaluates the gradient `A x - b` (equivalently, the residual).
///
/// # Errors
///
/// Returns [`Error::DimensionMismatch`] if `x.len() != n`.
pub fn gradient(system: &SpdSystem, x: &Vector) -> Result<Vector> {
    check_len(system, x)?;
    Ok(system.a().matvec(x).sub(system.b()))
}

/// Energy change caused by updating component `i` of the diagonally
/// preconditioned forward sweep with stepsize `h`.
///
/// `x_new` supplies the already-updated components `j < i` and `x_old` the
/// remaining ones. With
/// `r = sum_{j<i} a_ij x_new_j + a_ii x_old_i + sum_{j>i} a_ij x_old_j - b_i`
/// the update changes the energy by exactly
/// `-(1/a_ii) * (h / (1 + h/2)^2) * r^2`,
/// which is nonpositive for every `h > 0` and largest in magnitude at
/// `h = 2`.
///
/// # Errors
///
/// Returns [`Error::InvalidStepsize`] when `h <= 0` (or is not finite) and
/// [`Error::DimensionMismatch`] for wrong vector lengths.
///
/// # Panics
///
/// Panics if `i >= n`.
pub fn component_decrement(
    system: &SpdSystem,
    x_new: &Vector,
    x_old: &Vector,
    i: usize,
    h: f64,
) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidStepsize(h));
    }
    check_len(system, x_new)?;
    check_len(system, x_old)?;
    let n = system.n();
    assert!(i < n, "component index {i} out of range for n = {n}");

    let a = system.a();
    let row = a.row(i);
    let mut r = -system.b()[i];
    for j in 0..i {
        r += row[j] * x_new[j];
    }
    r += row[i] * x_old[i];
    for j in i + 1..n {
        r += row[j] * x_old[j];
    }
    let half = 1.0 + 0.5 * h;
    Ok(-(h / (half * half)) * r * r / a[(i, i)])
}

fn check_len(system: &SpdSystem, x: &Vector) -> Result<()> {
    if x.len() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: x.len(),
        });
    }
    Ok(())
}
