//! Classical stationary iterations in their textbook form: successive
//! over-relaxation (SOR), Gauss-Seidel, symmetric SOR and block SOR.
//!
//! These are implemented directly from the relaxation updates, independently
//! of the gradient-flow schemes in [`crate::scheme`], so that the two
//! families can be compared against each other in
//! [`crate::equivalence`] without sharing code paths.

use crate::error::{Error, Result};
use crate::linalg::{BlockSplitting, DenseMatrix, SpdSystem, Vector};
use crate::scheme::{record, IterationTrace};

/// The classical relaxation methods.
#[derive(Debug, Clone)]
pub enum ClassicalMethod {
    /// Successive over-relaxation with parameter `omega`.
    Sor,
    /// SOR fixed at `omega = 1`.
    GaussSeidel,
    /// Forward SOR sweep followed by a backward SOR sweep.
    Ssor,
    /// SOR over contiguous blocks instead of single coordinates.
    BlockSor(BlockSplitting),
}

impl ClassicalMethod {
    /// Short display name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::Sor => "sor",
            Self::GaussSeidel => "gauss-seidel",
            Self::Ssor => "ssor",
            Self::BlockSor(_) => "block-sor",
        }
    }
}

/// A classical method together with its relaxation parameter.
///
/// Any finite `omega > 0` is accepted — including `omega >= 2`, for which
/// the iteration provably cannot converge; use
/// [`ClassicalSpec::convergence_guaranteed`] to test whether `omega` lies in
/// the convergent window `(0, 2)`.
#[derive(Debug, Clone)]
pub struct ClassicalSpec {
    pub method: ClassicalMethod,
    pub omega: f64,
}

impl ClassicalSpec {
    /// Builds and validates a classical specification.
    ///
    /// # Errors
    ///
    /// Returns [`Error::OutOfRange`] unless `omega` is finite and positive,
    /// or when a [`ClassicalMethod::GaussSeidel`] spec carries an `omega`
    /// other than exactly `1`.
    pub fn new(method: ClassicalMethod, omega: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::OutOfRange {
                what: "relaxation parameter omega",
                value: omega,
                range: "(0, +inf)",
            });
        }
        if matches!(method, ClassicalMethod::GaussSeidel) && omega != 1.0 {
            return Err(Error::OutOfRange {
                what: "relaxation parameter omega",
                value: omega,
                range: "exactly 1 for gauss-seidel",
            });
        }
        Ok(Self { method, omega })
    }

    /// Gauss-Seidel, i.e. SOR with `omega = 1`.
    pub fn gauss_seidel() -> Self {
        Self {
            method: ClassicalMethod::GaussSeidel,
            omega: 1.0,
        }
    }

    /// Whether `omega` lies in `(0, 2)`, the window in which SOR-type
    /// iterations on SPD systems converge for every starting point.
    pub fn convergence_guaranteed(&self) -> bool {
        self.omega > 0.0 && self.omega < 2.0
    }
}

/// Applies one sweep of the classical method to `x`.
///
/// # Errors
///
/// Returns the validation errors of [`ClassicalSpec::new`] and
/// [`Error::DimensionMismatch`] for a wrong-length state or a block
/// partition that does not match the system size.
pub fn classical_sweep(spec: &ClassicalSpec, system: &SpdSystem, x: &Vector) -> Result<Vector> {
    check(spec, system, Some(x))?;
    Ok(match &spec.method {
        ClassicalMethod::Sor | ClassicalMethod::GaussSeidel => {
            sor_forward(system, spec.omega, x)
        }
        ClassicalMethod::Ssor => {
            let mid = sor_forward(system, spec.omega, x);
            sor_backward(system, spec.omega, &mid)
        }
        ClassicalMethod::BlockSor(bs) => block_sor_forward(system, bs, spec.omega, x),
    })
}

fn check(spec: &ClassicalSpec, system: &SpdSystem, x: Option<&Vector>) -> Result<()> {
    // Re-validate in case the spec was built literally rather than through
    // the constructor.
    ClassicalSpec::new(spec.method.clone(), spec.omega)?;
    if let ClassicalMethod::BlockSor(bs) = &spec.method {
        if bs.n() != system.n() {
            return Err(Error::DimensionMismatch {
                expected: system.n(),
                found: bs.n(),
            });
        }
    }
    if let Some(x) = x {
        if x.len() != system.n() {
            return Err(Error::DimensionMismatch {
                expected: system.n(),
                found: x.len(),
            });
        }
    }
    Ok(())
}

/// `x_i <- (1 - omega) x_i + (omega / a_ii) (b_i - sum_{j<i} a_ij x_new_j
/// - sum_{j>i} a_ij x_old_j)`, ascending `i`.
fn sor_forward(system: &SpdSystem, omega: f64, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let mut out = x.clone();
    for i in 0..n {
        let row = a.row(i);
        let mut acc = b[i];
        for j in 0..i {
            acc -= row[j] * out[j];
        }
        for j in i + 1..n {
            acc -= row[j] * x[j];
        }
        out[i] = (1.0 - omega) * x[i] + omega * acc / row[i];
    }
    out
}

/// The mirror sweep, descending `i`: components `j > i` are already updated.
fn sor_backward(system: &SpdSystem, omega: f64, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let mut out = x.clone();
    for i in (0..n).rev() {
        let row = a.row(i);
        let mut acc = b[i];
        for j in 0..i {
            acc -= row[j] * x[j];
        }
        for j in i + 1..n {
            acc -= row[j] * out[j];
        }
        out[i] = (1.0 - omega) * x[i] + omega * acc / row[i];
    }
    out
}

/// Block SOR sweep: coordinates become contiguous blocks and the diagonal
/// division becomes a solve with the cached factorization of each `A_ii`.
fn block_sor_forward(system: &SpdSystem, bs: &BlockSplitting, omega: f64, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let mut out = x.clone();
    for bi in 0..bs.block_count() {
        let range = bs.range(bi);
        let mut r = Vector::zeros(range.len());
        for (local, i) in range.clone().enumerate() {
            let row = a.row(i);
            let mut acc = b[i];
            for j in 0..range.start {
                acc -= row[j] * out[j];
            }
            for j in range.end..n {
                acc -= row[j] * x[j];
            }
            r[local] = acc;
        }
        let v = bs.solve_block(bi, &r);
        for (local, i) in range.enumerate() {
            out[i] = (1.0 - omega) * x[i] + omega * v[local];
        }
    }
    out
}

/// Materializes the classical method as the affine map `x_new = G x_old + c`:
///
/// * SOR: `G = (D + omega L)^{-1} [(1 - omega) D - omega U]`,
///   `c = omega (D + omega L)^{-1} b`;
/// * SSOR: product of the backward map `(D + omega U)^{-1} [(1 - omega) D - omega L]`
///   with the forward map;
/// * block SOR: the SOR formula with `D_b`, `L_b`, `U_b`.
///
/// Assembled through (block-)triangular solves, never explicit inverses.
///
/// # Errors
///
/// Same as [`classical_sweep`].
pub fn classical_iteration_matrix(
    spec: &ClassicalSpec,
    system: &SpdSystem,
) -> Result<(DenseMatrix, Vector)> {
    check(spec, system, None)?;
    let omega = spec.omega;
    match &spec.method {
        ClassicalMethod::Sor | ClassicalMethod::GaussSeidel => {
            Ok(sor_matrix(system, omega, false))
        }
        ClassicalMethod::Ssor => {
            let (gf, cf) = sor_matrix(system, omega, false);
            let (gb, cb) = sor_matrix(system, omega, true);
            Ok((gb.matmul(&gf), gb.matvec(&cf).add(&cb)))
        }
        ClassicalMethod::BlockSor(bs) => {
            let right = bs
                .d_matrix()
                .scaled(1.0 - omega)
                .sub(&bs.ub().scaled(omega));
            let g = bs.solve_block_lower_matrix(1.0, omega, &right);
            let c = bs.solve_block_lower(1.0, omega, system.b()).scaled(omega);
            Ok((g, c))
        }
    }
}

fn sor_matrix(system: &SpdSystem, omega: f64, backward: bool) -> (DenseMatrix, Vector) {
    let n = system.n();
    let split = system.split();
    let d = split.d().clone();
    let mut right = if backward {
        split.l().scaled(-omega)
    } else {
        split.u().scaled(-omega)
    };
    for i in 0..n {
        right[(i, i)] = (1.0 - omega) * d[i];
    }
    let (g, c) = if backward {
        (
            split.solve_upper_matrix(&d, omega, &right),
            split.solve_upper(&d, omega, system.b()),
        )
    } else {
        (
            split.solve_lower_matrix(&d, omega, &right),
            split.solve_lower(&d, omega, system.b()),
        )
    };
    (g, c.scaled(omega))
}

/// Iterates the classical method from `x0` with the same stopping rule and
/// trace bookkeeping as [`crate::scheme::run`].
///
/// # Errors
///
/// Same as [`classical_sweep`].
///
/// # Panics
///
/// Panics unless `tol > 0` and `max_iters >= 1`.
pub fn run(
    spec: &ClassicalSpec,
    system: &SpdSystem,
    x0: &Vector,
    tol: f64,
    max_iters: usize,
) -> Result<IterationTrace> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iters >= 1, "iteration budget must be at least 1");
    check(spec, system, Some(x0))?;
    let b_norm = system.b().norm2();
    let threshold = if b_norm > 0.0 { tol * b_norm } else { tol };

    let mut trace = IterationTrace {
        iterates: Vec::new(),
        energies: Vec::new(),
        residual_norms: Vec::new(),
        decrements: Vec::new(),
        converged: false,
    };
    let mut x = x0.clone();
    record(&mut trace, system, x.clone());
    trace.converged = trace.final_residual() <= threshold;
    while !trace.converged && trace.iterations() < max_iters {
        x = classical_sweep(spec, system, &x)?;
        record(&mut trace, system, x.clone());
        trace.converged = trace.final_residual() <= threshold;
    }
    Ok(trace)
}
