//! Numerical verification that the gradient-flow schemes *are* the classical
//! relaxation methods.
//!
//! Under the stepsize map `h = 2 omega / (2 - omega)` the forward
//! coordinate sweep with Jacobi preconditioning coincides with SOR, the
//! symmetric sweep with SSOR, and the block sweep with block SOR — same
//! iterates, same affine maps. [`check_equivalence`] establishes this for a
//! concrete system by running both routes through their independent
//! implementations ([`crate::scheme`] vs [`crate::classical`]) and measuring
//! the gaps, which should sit at rounding level.
//!
//! The map sends the convergent relaxation window `omega in (0, 2)` onto all
//! positive stepsizes `h > 0`; that every positive stepsize works for the
//! dissipative schemes is exactly why every `omega in (0, 2)` works for SOR.

use crate::classical::{classical_iteration_matrix, classical_sweep, ClassicalMethod, ClassicalSpec};
use crate::error::{Error, Result};
use crate::linalg::{BlockSplitting, DenseMatrix, Preconditioner, SpdSystem, Vector};
use crate::scheme::{iteration_matrix, step, SchemeMethod, SchemeSpec};

/// Relative tolerance for iteration-matrix and offset-vector gaps.
pub const MATRIX_RTOL: f64 = 1e-11;
/// Relative tolerance for iterate-sequence gaps.
pub const SEQUENCE_RTOL: f64 = 1e-9;

/// Maps the relaxation parameter to the gradient-flow stepsize,
/// `h = 2 omega / (2 - omega)`.
///
/// # Errors
///
/// Returns [`Error::OutOfRange`] unless `0 < omega < 2` (the map leaves the
/// positive stepsizes at `omega = 2`).
pub fn omega_to_h(omega: f64) -> Result<f64> {
    if !(omega.is_finite() && omega > 0.0 && omega < 2.0) {
        return Err(Error::OutOfRange {
            what: "relaxation parameter omega",
            value: omega,
            range: "(0, 2)",
        });
    }
    Ok(2.0 * omega / (2.0 - omega))
}

/// Inverse map, `omega = 2 h / (2 + h)`.
///
/// # Errors
///
/// Returns [`Error::OutOfRange`] unless `h` is finite and positive.
pub fn h_to_omega(h: f64) -> Result<f64> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::OutOfRange {
            what: "stepsize h",
            value: h,
            range: "(0, +inf)",
        });
    }
    Ok(2.0 * h / (2.0 + h))
}

/// The method pairs related by the stepsize map.
#[derive(Debug, Clone)]
pub enum EquivalencePair {
    /// Forward coordinate sweep with Jacobi preconditioning vs SOR.
    ItohAbeSor,
    /// Symmetric sweep with Jacobi preconditioning vs SSOR.
    SymmetricSsor,
    /// Block sweep with block-Jacobi preconditioning vs block SOR, both on
    /// the given partition.
    BlockSorPair(BlockSplitting),
}

impl EquivalencePair {
    /// Short display name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::ItohAbeSor => "itoh-abe/sor",
            Self::SymmetricSsor => "symmetric/ssor",
            Self::BlockSorPair(_) => "block/block-sor",
        }
    }

    fn specs(&self, omega: f64) -> Result<(SchemeSpec, ClassicalSpec)> {
        let h = omega_to_h(omega)?;
        Ok(match self {
            Self::ItohAbeSor => (
                SchemeSpec::new(SchemeMethod::DgItohAbe, Preconditioner::JacobiInverse, h)?,
                ClassicalSpec::new(ClassicalMethod::Sor, omega)?,
            ),
            Self::SymmetricSsor => (
                SchemeSpec::new(SchemeMethod::DgSymmetric, Preconditioner::JacobiInverse, h)?,
                ClassicalSpec::new(ClassicalMethod::Ssor, omega)?,
            ),
            Self::BlockSorPair(bs) => (
                SchemeSpec::new(
                    SchemeMethod::DgBlock(bs.clone()),
                    Preconditioner::BlockJacobiInverse(bs.clone()),
                    h,
                )?,
                ClassicalSpec::new(ClassicalMethod::BlockSor(bs.clone()), omega)?,
            ),
        })
    }
}

/// Measured gaps between the two routes, with the tolerances they were
/// judged against.
#[derive(Debug, Clone)]
pub struct EquivalenceReport {
    /// Largest entrywise gap between the two iteration matrices.
    pub matrix_gap: f64,
    /// Largest componentwise gap between the two offset vectors.
    pub vector_gap: f64,
    /// Largest componentwise gap between the two iterate sequences.
    pub sequence_gap: f64,
    /// Scaled threshold applied to `matrix_gap` and `vector_gap`.
    pub matrix_tolerance: f64,
    /// Scaled threshold applied to `sequence_gap`.
    pub sequence_tolerance: f64,
    pub passed: bool,
}

/// Verifies one equivalence pair on a concrete system: compares the two
/// iteration matrices and offset vectors, then runs both sweeps side by side
/// for `iterations` steps from `x0` and compares every iterate.
///
/// # Errors
///
/// Returns [`Error::OutOfRange`] for `omega` outside `(0, 2)` and
/// [`Error::DimensionMismatch`] for a wrong-length `x0` or a partition that
/// does not match the system.
pub fn check_equivalence(
    pair: &EquivalencePair,
    system: &SpdSystem,
    omega: f64,
    x0: &Vector,
    iterations: usize,
) -> Result<EquivalenceReport> {
    let (scheme_spec, classical_spec) = pair.specs(omega)?;

    let (g_dg, c_dg) = iteration_matrix(&scheme_spec, system)?;
    let (g_cl, c_cl) = classical_iteration_matrix(&classical_spec, system)?;
    let matrix_gap = g_dg.sub(&g_cl).max_abs();
    let vector_gap = c_dg.sub(&c_cl).norm_inf();
    let matrix_scale = 1.0 + g_cl.max_abs().max(c_cl.norm_inf());

    let mut x_dg = x0.clone();
    let mut x_cl = x0.clone();
    let mut sequence_gap = 0.0f64;
    let mut sequence_scale = x0.norm_inf();
    for _ in 0..iterations {
        x_dg = step(&scheme_spec, system, &x_dg)?;
        x_cl = classical_sweep(&classical_spec, system, &x_cl)?;
        sequence_gap = sequence_gap.max(x_dg.sub(&x_cl).norm_inf());
        sequence_scale = sequence_scale.max(x_cl.norm_inf());
    }

    let matrix_tolerance = MATRIX_RTOL * matrix_scale;
    let sequence_tolerance = SEQUENCE_RTOL * (1.0 + sequence_scale);
    let passed = matrix_gap <= matrix_tolerance
        && vector_gap <= matrix_tolerance
        && sequence_gap <= sequence_tolerance;
    Ok(EquivalenceReport {
        matrix_gap,
        vector_gap,
        sequence_gap,
        matrix_tolerance,
        sequence_tolerance,
        passed,
    })
}

/// The iteration matrix `I - P A` of the explicit Euler step at unit
/// stepsize — the bridge to the non-dissipative classics: `P = I` gives
/// Richardson, `P = D^{-1}` gives Jacobi.
pub fn euler_connection_matrix(system: &SpdSystem, p: &Preconditioner) -> DenseMatrix {
    let pa = p.matrix(system).matmul(system.a());
    DenseMatrix::identity(system.n()).sub(&pa)
}
