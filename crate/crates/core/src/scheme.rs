//! One-step integrators for the preconditioned gradient flow
//! `dx/dt = -P (A x - b)`.
//!
//! The discrete-gradient (DG) schemes discretize the flow as
//! `(x_new - x_old) / h = -P dg(x_new, x_old)` and inherit the exact energy
//! decrease of the discrete gradient: they converge to `A^{-1} b` for every
//! stepsize `h > 0`. For the coordinate-incremental discrete gradients and
//! diagonal preconditioning the implicit update untangles into an explicit
//! sweep, which is what [`step`] implements; no linear solves are needed
//! except for the midpoint rule.
//!
//! Every scheme here is affine, `x_new = G x_old + c`, and
//! [`iteration_matrix`] materializes that pair through an independent
//! triangular-solve route so sweeps and matrices can be cross-checked.
//! [`ExplicitEuler`](SchemeMethod::ExplicitEuler) is the deliberately
//! non-dissipative member of the family: it converges only when
//! `rho(I - h P A) < 1`.

use crate::energy::{energy, gradient};
use crate::error::{Error, Result};
use crate::linalg::{
    BlockSplitting, DenseMatrix, LuFactors, Preconditioner, SpdSystem, Vector,
};

/// The one-step methods.
#[derive(Debug, Clone)]
pub enum SchemeMethod {
    /// Forward coordinate sweep from the coordinate-incremental discrete
    /// gradient.
    DgItohAbe,
    /// Backward coordinate sweep from the reverse discrete gradient.
    DgItohAbeReverse,
    /// Forward sweep followed by a backward sweep, both with the same
    /// stepsize; counts as a single iteration.
    DgSymmetric,
    /// Blockwise forward sweep along a contiguous partition.
    DgBlock(BlockSplitting),
    /// Implicit midpoint rule `(I + (h/2) P A) x_new = (I - (h/2) P A) x_old + h P b`.
    DgMidpoint,
    /// Explicit Euler step `x - h P (A x - b)`; dissipative only for small
    /// stepsizes.
    ExplicitEuler,
}

impl SchemeMethod {
    /// Short display name used in reports.
    pub fn name(&self) -> &'static str {
        match self {
            Self::DgItohAbe => "dg-itoh-abe",
            Self::DgItohAbeReverse => "dg-itoh-abe-reverse",
            Self::DgSymmetric => "dg-symmetric",
            Self::DgBlock(_) => "dg-block",
            Self::DgMidpoint => "dg-midpoint",
            Self::ExplicitEuler => "explicit-euler",
        }
    }

    /// Whether the method is built from a discrete gradient (and therefore
    /// decreases the energy for every stepsize).
    pub fn is_discrete_gradient(&self) -> bool {
        !matches!(self, Self::ExplicitEuler)
    }
}

/// A fully specified scheme: method, preconditioner and stepsize.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    pub method: SchemeMethod,
    pub preconditioner: Preconditioner,
    pub h: f64,
}

impl SchemeSpec {
    /// Builds and validates a scheme specification.
    ///
    /// # Errors
    ///
    /// See [`SchemeSpec::validate`].
    pub fn new(method: SchemeMethod, preconditioner: Preconditioner, h: f64) -> Result<Self> {
        let spec = Self {
            method,
            preconditioner,
            h,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the stepsize and the method/preconditioner pairing.
    ///
    /// # Errors
    ///
    /// Returns [`Error::InvalidStepsize`] unless `h > 0` is finite, and
    /// [`Error::IncompatiblePreconditioner`] when a coordinate sweep is
    /// paired with anything other than `Identity`/`JacobiInverse`, or a
    /// block sweep with anything other than the block-Jacobi inverse of the
    /// same partition.
    pub fn validate(&self) -> Result<()> {
        if !(self.h.is_finite() && self.h > 0.0) {
            return Err(Error::InvalidStepsize(self.h));
        }
        match (&self.method, &self.preconditioner) {
            (
                SchemeMethod::DgItohAbe | SchemeMethod::DgItohAbeReverse | SchemeMethod::DgSymmetric,
                Preconditioner::Identity | Preconditioner::JacobiInverse,
            ) => Ok(()),
            (
                SchemeMethod::DgItohAbe | SchemeMethod::DgItohAbeReverse | SchemeMethod::DgSymmetric,
                _,
            ) => Err(Error::IncompatiblePreconditioner(
                "coordinate sweeps support only identity or jacobi-inverse preconditioning",
            )),
            (SchemeMethod::DgBlock(bs), Preconditioner::BlockJacobiInverse(pbs)) => {
                if bs.same_partition(pbs) {
                    Ok(())
                } else {
                    Err(Error::IncompatiblePreconditioner(
                        "block sweep and block-jacobi preconditioner use different partitions",
                    ))
                }
            }
            (SchemeMethod::DgBlock(_), _) => Err(Error::IncompatiblePreconditioner(
                "block sweeps require the block-jacobi-inverse preconditioner of their partition",
            )),
            (SchemeMethod::DgMidpoint | SchemeMethod::ExplicitEuler, _) => Ok(()),
        }
    }
}

/// Record of a full iteration: every iterate with its energy, residual norm
/// and energy change. All four lists have the same length; index `k` is the
/// state after `k` steps.
#[derive(Debug, Clone)]
pub struct IterationTrace {
    pub iterates: Vec<Vector>,
    pub energies: Vec<f64>,
    pub residual_norms: Vec<f64>,
    pub decrements: Vec<f64>,
    /// Whether the stopping criterion was met within the iteration budget.
    /// `false` means the run ended at `max_iters` — data, not an error.
    pub converged: bool,
}

impl IterationTrace {
    /// Number of steps taken.
    pub fn iterations(&self) -> usize {
        self.iterates.len() - 1
    }

    /// The last iterate.
    pub fn final_iterate(&self) -> &Vector {
        self.iterates.last().expect("trace contains x0")
    }

    /// Residual norm of the last iterate.
    pub fn final_residual(&self) -> f64 {
        *self
            .residual_norms
            .last()
            .expect("trace contains x0")
    }

    /// The last recorded energy.
    pub fn final_energy(&self) -> f64 {
        *self.energies.last().expect("trace contains x0")
    }
}

/// Scheme with everything precomputed for repeated application.
struct PreparedScheme<'a> {
    system: &'a SpdSystem,
    h: f64,
    kind: StepKind<'a>,
}

enum StepKind<'a> {
    Forward { jacobi: bool },
    Backward { jacobi: bool },
    Symmetric { jacobi: bool },
    Block { bs: &'a BlockSplitting },
    Midpoint {
        lhs: LuFactors,
        rhs_mat: DenseMatrix,
        hpb: Vector,
    },
    Euler { p: &'a Preconditioner },
}

fn prepare<'a>(spec: &'a SchemeSpec, system: &'a SpdSystem) -> Result<PreparedScheme<'a>> {
    spec.validate()?;
    let jacobi = matches!(spec.preconditioner, Preconditioner::JacobiInverse);
    let kind = match &spec.method {
        SchemeMethod::DgItohAbe => StepKind::Forward { jacobi },
        SchemeMethod::DgItohAbeReverse => StepKind::Backward { jacobi },
        SchemeMethod::DgSymmetric => StepKind::Symmetric { jacobi },
        SchemeMethod::DgBlock(bs) => {
            if bs.n() != system.n() {
                return Err(Error::DimensionMismatch {
                    expected: system.n(),
                    found: bs.n(),
                });
            }
            StepKind::Block { bs }
        }
        SchemeMethod::DgMidpoint => {
            let (lhs, rhs_mat, hpb) = midpoint_parts(system, &spec.preconditioner, spec.h)?;
            StepKind::Midpoint { lhs, rhs_mat, hpb }
        }
        SchemeMethod::ExplicitEuler => StepKind::Euler {
            p: &spec.preconditioner,
        },
    };
    Ok(PreparedScheme {
        system,
        h: spec.h,
        kind,
    })
}

/// Assembles the midpoint-rule pieces: the factored left-hand side
/// `I + (h/2) P A`, the right-hand matrix `I - (h/2) P A` and the vector
/// `h P b`.
fn midpoint_parts(
    system: &SpdSystem,
    p: &Preconditioner,
    h: f64,
) -> Result<(LuFactors, DenseMatrix, Vector)> {
    let n = system.n();
    let pa = p.matrix(system).matmul(system.a());
    let identity = DenseMatrix::identity(n);
    let lhs = identity.add(&pa.scaled(0.5 * h));
    let rhs_mat = identity.sub(&pa.scaled(0.5 * h));
    let hpb = p.apply(system, system.b()).scaled(h);
    Ok((LuFactors::factor(&lhs)?, rhs_mat, hpb))
}

impl PreparedScheme<'_> {
    fn apply(&self, x: &Vector) -> Vector {
        match &self.kind {
            StepKind::Forward { jacobi } => forward_sweep(self.system, self.h, *jacobi, x),
            StepKind::Backward { jacobi } => backward_sweep(self.system, self.h, *jacobi, x),
            StepKind::Symmetric { jacobi } => {
                let mid = forward_sweep(self.system, self.h, *jacobi, x);
                backward_sweep(self.system, self.h, *jacobi, &mid)
            }
            StepKind::Block { bs } => block_forward_sweep(self.system, bs, self.h, x),
            StepKind::Midpoint { lhs, rhs_mat, hpb } => {
                lhs.solve(&rhs_mat.matvec(x).add(hpb))
            }
            StepKind::Euler { p } => {
                let residual = gradient(self.system, x).expect("dimensions match");
                x.sub(&p.apply(self.system, &residual).scaled(self.h))
            }
        }
    }
}

/// Forward coordinate sweep of the DG scheme. With `jacobi = true` the
/// preconditioner is `D^{-1}` and each component update reads
/// `x_i <- [(1 - h/2) x_i - (h / a_ii) s_i] / (1 + h/2)`; with the identity
/// preconditioner the division by `a_ii` moves into the bracket weights.
/// Here `s_i` couples the already-updated components `j < i` with the old
/// components `j > i`.
fn forward_sweep(system: &SpdSystem, h: f64, jacobi: bool, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let mut out = x.clone();
    for i in 0..n {
        let row = a.row(i);
        let aii = row[i];
        let mut s = -b[i];
        for j in 0..i {
            s += row[j] * out[j];
        }
        for j in i + 1..n {
            s += row[j] * x[j];
        }
        out[i] = if jacobi {
            ((1.0 - 0.5 * h) * x[i] - h * s / aii) / (1.0 + 0.5 * h)
        } else {
            ((1.0 - 0.5 * h * aii) * x[i] - h * s) / (1.0 + 0.5 * h * aii)
        };
    }
    out
}

/// Backward coordinate sweep (the reverse discrete gradient): components are
/// updated from `i = n-1` down to `0`, coupling old components `j < i` with
/// already-updated components `j > i`.
fn backward_sweep(system: &SpdSystem, h: f64, jacobi: bool, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let mut out = x.clone();
    for i in (0..n).rev() {
        let row = a.row(i);
        let aii = row[i];
        let mut s = -b[i];
        for j in 0..i {
            s += row[j] * x[j];
        }
        for j in i + 1..n {
            s += row[j] * out[j];
        }
        out[i] = if jacobi {
            ((1.0 - 0.5 * h) * x[i] - h * s / aii) / (1.0 + 0.5 * h)
        } else {
            ((1.0 - 0.5 * h * aii) * x[i] - h * s) / (1.0 + 0.5 * h * aii)
        };
    }
    out
}

/// Blockwise forward sweep: like [`forward_sweep`] with coordinates replaced
/// by contiguous blocks and the diagonal division replaced by a solve with
/// the cached factorization of each `A_ii`.
fn block_forward_sweep(system: &SpdSystem, bs: &BlockSplitting, h: f64, x: &Vector) -> Vector {
    let n = system.n();
    let a = system.a();
    let b = system.b();
    let half = 1.0 + 0.5 * h;
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
            out[i] = ((1.0 - 0.5 * h) * x[i] + h * v[local]) / half;
        }
    }
    out
}

/// Applies one step of the scheme to `x`.
///
/// # Errors
///
/// Returns the validation errors of [`SchemeSpec::validate`],
/// [`Error::DimensionMismatch`] for a wrong-length state or mismatched block
/// partition, and [`Error::Singular`] if the midpoint left-hand side cannot
/// be factored (impossible for SPD `P A` and `h > 0`, but guarded).
pub fn step(spec: &SchemeSpec, system: &SpdSystem, x: &Vector) -> Result<Vector> {
    if x.len() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: x.len(),
        });
    }
    Ok(prepare(spec, system)?.apply(x))
}

/// Iterates the scheme from `x0` until the residual test
/// `||A x - b||_2 <= tol * ||b||_2` (absolute `tol` when `b = 0`) or until
/// `max_iters` steps, recording every iterate.
///
/// Hitting `max_iters` is reported through `converged = false` in the trace,
/// not as an error.
///
/// # Errors
///
/// Same as [`step`].
///
/// # Panics
///
/// Panics unless `tol > 0` and `max_iters >= 1`.
pub fn run(
    spec: &SchemeSpec,
    system: &SpdSystem,
    x0: &Vector,
    tol: f64,
    max_iters: usize,
) -> Result<IterationTrace> {
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(max_iters >= 1, "iteration budget must be at least 1");
    if x0.len() != system.n() {
        return Err(Error::DimensionMismatch {
            expected: system.n(),
            found: x0.len(),
        });
    }
    let prepared = prepare(spec, system)?;
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
        x = prepared.apply(&x);
        record(&mut trace, system, x.clone());
        trace.converged = trace.final_residual() <= threshold;
    }
    Ok(trace)
}

/// Appends `x` with its energy, residual norm and energy change to `trace`.
/// Shared with [`crate::classical`] so both solver families produce
/// identically structured traces.
pub(crate) fn record(trace: &mut IterationTrace, system: &SpdSystem, x: Vector) {
    let f = energy(system, &x).expect("dimensions match");
    let residual = gradient(system, &x).expect("dimensions match").norm2();
    let decrement = match trace.energies.last() {
        Some(prev) => f - prev,
        None => 0.0,
    };
    trace.iterates.push(x);
    trace.energies.push(f);
    trace.residual_norms.push(residual);
    trace.decrements.push(decrement);
}

/// Materializes the scheme as the affine map `x_new = G x_old + c`.
///
/// The matrices are assembled through (block-)triangular solves against the
/// splitting of `A` — an independent route from the sweeps in [`step`], so
/// the two can be compared in tests:
///
/// * forward sweep, `P = D^{-1}`:
///   `G = [(1 + h/2) D + h L]^{-1} [(1 - h/2) D - h U]`,
///   `c = h [(1 + h/2) D + h L]^{-1} b`;
/// * forward sweep, `P = I`: the same with `(1 +/- (h/2) d_i)` diagonals and
///   `h L`, `h U` couplings;
/// * backward sweep: mirror image (roles of `L` and `U` swapped);
/// * symmetric: product of the backward and forward maps;
/// * block sweep: the forward formula with `D_b`, `L_b`, `U_b`;
/// * midpoint: `G = (I + (h/2) P A)^{-1} (I - (h/2) P A)`, `c = h (I + (h/2) P A)^{-1} P b`;
/// * explicit Euler: `G = I - h P A`, `c = h P b`.
///
/// # Errors
///
/// Same as [`step`].
pub fn iteration_matrix(spec: &SchemeSpec, system: &SpdSystem) -> Result<(DenseMatrix, Vector)> {
    spec.validate()?;
    let n = system.n();
    let h = spec.h;
    let jacobi = matches!(spec.preconditioner, Preconditioner::JacobiInverse);
    match &spec.method {
        SchemeMethod::DgItohAbe => Ok(sweep_matrix(system, h, jacobi, false)),
        SchemeMethod::DgItohAbeReverse => Ok(sweep_matrix(system, h, jacobi, true)),
        SchemeMethod::DgSymmetric => {
            let (gf, cf) = sweep_matrix(system, h, jacobi, false);
            let (gb, cb) = sweep_matrix(system, h, jacobi, true);
            Ok((gb.matmul(&gf), gb.matvec(&cf).add(&cb)))
        }
        SchemeMethod::DgBlock(bs) => {
            if bs.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: bs.n(),
                });
            }
            let alpha = 1.0 + 0.5 * h;
            let right = bs.d_matrix().scaled(1.0 - 0.5 * h).sub(&bs.ub().scaled(h));
            let g = bs.solve_block_lower_matrix(alpha, h, &right);
            let c = bs.solve_block_lower(alpha, h, system.b()).scaled(h);
            Ok((g, c))
        }
        SchemeMethod::DgMidpoint => {
            let (lhs, rhs_mat, hpb) = midpoint_parts(system, &spec.preconditioner, h)?;
            Ok((lhs.solve_matrix(&rhs_mat), lhs.solve(&hpb)))
        }
        SchemeMethod::ExplicitEuler => {
            let pa = spec.preconditioner.matrix(system).matmul(system.a());
            let g = DenseMatrix::identity(n).sub(&pa.scaled(h));
            let c = spec
                .preconditioner
                .apply(system, system.b())
                .scaled(h);
            Ok((g, c))
        }
    }
}

/// Iteration matrix and vector of a single coordinate sweep (forward or
/// backward, identity or Jacobi preconditioning).
fn sweep_matrix(
    system: &SpdSystem,
    h: f64,
    jacobi: bool,
    backward: bool,
) -> (DenseMatrix, Vector) {
    let n = system.n();
    let split = system.split();
    let d = split.d();
    // Diagonals of the implicit and explicit sides of the update.
    let (g_diag, r_diag): (Vector, Vector) = if jacobi {
        (
            d.scaled(1.0 + 0.5 * h),
            d.scaled(1.0 - 0.5 * h),
        )
    } else {
        (
            Vector::from_vec((0..n).map(|i| 1.0 + 0.5 * h * d[i]).collect()),
            Vector::from_vec((0..n).map(|i| 1.0 - 0.5 * h * d[i]).collect()),
        )
    };
    let mut right = if backward {
        split.l().scaled(-h)
    } else {
        split.u().scaled(-h)
    };
    for i in 0..n {
        right[(i, i)] = r_diag[i];
    }
    let (g, c) = if backward {
        (
            split.solve_upper_matrix(&g_diag, h, &right),
            split.solve_upper(&g_diag, h, system.b()),
        )
    } else {
        (
            split.solve_lower_matrix(&g_diag, h, &right),
            split.solve_lower(&g_diag, h, system.b()),
        )
    };
    (g, c.scaled(h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::spectral_radius;
    use crate::test_util::{random_system, random_vector, rng};

    fn two_by_two() -> SpdSystem {
        SpdSystem::new(
            DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]),
            Vector::from_vec(vec![3.0, 3.0]),
        )
        .unwrap()
    }

    fn jacobi_spec(method: SchemeMethod, h: f64) -> SchemeSpec {
        SchemeSpec::new(method, Preconditioner::JacobiInverse, h).unwrap()
    }

    #[test]
    fn forward_sweep_at_h_two_reproduces_a_gauss_seidel_sweep() {
        let system = two_by_two();
        let spec = jacobi_spec(SchemeMethod::DgItohAbe, 2.0);
        let x = step(&spec, &system, &Vector::zeros(2)).unwrap();
        assert!((x[0] - 1.5).abs() <= 1e-15);
        assert!((x[1] - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn backward_sweep_is_the_mirror_image() {
        let system = two_by_two();
        let spec = jacobi_spec(SchemeMethod::DgItohAbeReverse, 2.0);
        let x = step(&spec, &system, &Vector::zeros(2)).unwrap();
        assert!((x[0] - 0.75).abs() <= 1e-15);
        assert!((x[1] - 1.5).abs() <= 1e-15);
    }

    #[test]
    fn symmetric_step_chains_forward_and_backward_sweeps() {
        let system = two_by_two();
        let spec = jacobi_spec(SchemeMethod::DgSymmetric, 2.0);
        let x = step(&spec, &system, &Vector::zeros(2)).unwrap();
        assert!((x[0] - 1.125).abs() <= 1e-15);
        assert!((x[1] - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn gauss_seidel_iteration_matrix_of_the_two_by_two_model() {
        let system = two_by_two();
        let (g, c) = iteration_matrix(&jacobi_spec(SchemeMethod::DgItohAbe, 2.0), &system).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![0.0, -0.5], vec![0.0, 0.25]]);
        assert!(g.sub(&expected).max_abs() <= 1e-15);
        assert!((c[0] - 1.5).abs() <= 1e-15);
        assert!((c[1] - 0.75).abs() <= 1e-15);
    }

    #[test]
    fn explicit_euler_matrix_at_unit_stepsize_is_i_minus_a() {
        let system = two_by_two();
        let spec = SchemeSpec::new(SchemeMethod::ExplicitEuler, Preconditioner::Identity, 1.0)
            .unwrap();
        let (g, c) = iteration_matrix(&spec, &system).unwrap();
        let expected = DenseMatrix::from_rows(&[vec![-1.0, -1.0], vec![-1.0, -1.0]]);
        assert_eq!(g, expected);
        assert_eq!(c.as_slice(), system.b().as_slice());
        // (1, -1) is the eigenvector of A with eigenvalue 1, so one Euler
        // step with b = 0 sends it to zero.
        let homogeneous = SpdSystem::new(system.a().clone(), Vector::zeros(2)).unwrap();
        let x = step(&spec, &homogeneous, &Vector::from_vec(vec![1.0, -1.0])).unwrap();
        assert!(x.norm_inf() <= 1e-15);
    }

    fn all_specs(system: &SpdSystem) -> Vec<SchemeSpec> {
        let boundaries: Vec<usize> = (1..system.n()).step_by(2).collect();
        let bs = system.block_split(&boundaries).unwrap();
        vec![
            SchemeSpec::new(SchemeMethod::DgItohAbe, Preconditioner::Identity, 0.8).unwrap(),
            jacobi_spec(SchemeMethod::DgItohAbe, 2.0),
            SchemeSpec::new(SchemeMethod::DgItohAbeReverse, Preconditioner::Identity, 3.0)
                .unwrap(),
            jacobi_spec(SchemeMethod::DgItohAbeReverse, 1.3),
            jacobi_spec(SchemeMethod::DgSymmetric, 2.5),
            SchemeSpec::new(SchemeMethod::DgSymmetric, Preconditioner::Identity, 0.4).unwrap(),
            SchemeSpec::new(
                SchemeMethod::DgBlock(bs.clone()),
                Preconditioner::BlockJacobiInverse(bs),
                1.7,
            )
            .unwrap(),
            SchemeSpec::new(SchemeMethod::DgMidpoint, Preconditioner::Identity, 2.0).unwrap(),
            SchemeSpec::new(SchemeMethod::DgMidpoint, Preconditioner::JacobiInverse, 0.6)
                .unwrap(),
            SchemeSpec::new(SchemeMethod::ExplicitEuler, Preconditioner::JacobiInverse, 0.3)
                .unwrap(),
        ]
    }

    #[test]
    fn every_method_fixes_the_direct_solution() {
        let mut r = rng(83);
        for n in [2, 5, 9] {
            let system = random_system(&mut r, n);
            let sol = system.solution().clone();
            for spec in all_specs(&system) {
                let next = step(&spec, &system, &sol).unwrap();
                let drift = next.sub(&sol).norm_inf();
                assert!(
                    drift <= 1e-12 * (1.0 + sol.norm_inf()),
                    "{} drifted by {drift:e}",
                    spec.method.name()
                );
            }
        }
    }

    #[test]
    fn sweeps_agree_with_their_iteration_matrices() {
        let mut r = rng(89);
        for n in [2, 4, 8, 13] {
            let system = random_system(&mut r, n);
            for spec in all_specs(&system) {
                let (g, c) = iteration_matrix(&spec, &system).unwrap();
                for _ in 0..5 {
                    let x = random_vector(&mut r, n, -3.0, 3.0);
                    let via_sweep = step(&spec, &system, &x).unwrap();
                    let via_matrix = g.matvec(&x).add(&c);
                    let gap = via_sweep.sub(&via_matrix).norm_inf();
                    assert!(
                        gap <= 1e-12 * (1.0 + via_matrix.norm_inf()),
                        "{}: affine gap {gap:e}",
                        spec.method.name()
                    );
                }
            }
        }
    }

    #[test]
    fn discrete_gradient_methods_never_increase_the_energy() {
        let mut r = rng(97);
        let system = random_system(&mut r, 7);
        let x0 = random_vector(&mut r, 7, -2.0, 2.0);
        for spec in all_specs(&system) {
            if !spec.method.is_discrete_gradient() {
                continue;
            }
            let trace = run(&spec, &system, &x0, 1e-12, 50).unwrap();
            for k in 1..trace.energies.len() {
                let (prev, next) = (trace.energies[k - 1], trace.energies[k]);
                assert!(
                    next <= prev + 1e-12 * (1.0 + prev.abs()),
                    "{}: energy rose from {prev} to {next} at step {k}",
                    spec.method.name()
                );
            }
        }
    }

    #[test]
    fn run_converges_on_the_tridiagonal_model_for_wildly_different_stepsizes() {
        let n = 10;
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
        let system = SpdSystem::new(a, b).unwrap();
        for h in [0.1, 1.0, 10.0, 100.0] {
            let trace = run(
                &jacobi_spec(SchemeMethod::DgItohAbe, h),
                &system,
                &Vector::zeros(n),
                1e-10,
                10_000,
            )
            .unwrap();
            assert!(trace.converged, "h={h} did not converge");
            let err = trace.final_iterate().sub(system.solution()).norm_inf();
            assert!(err <= 1e-8, "h={h}: error {err:e}");
        }
    }

    #[test]
    fn trace_lengths_and_decrements_are_consistent() {
        let system = two_by_two();
        let trace = run(
            &jacobi_spec(SchemeMethod::DgItohAbe, 2.0),
            &system,
            &Vector::zeros(2),
            1e-12,
            100,
        )
        .unwrap();
        assert!(trace.converged);
        let len = trace.iterates.len();
        assert_eq!(trace.energies.len(), len);
        assert_eq!(trace.residual_norms.len(), len);
        assert_eq!(trace.decrements.len(), len);
        assert_eq!(trace.decrements[0], 0.0);
        // Decrements telescope to the total energy drop.
        let total: f64 = trace.decrements.iter().sum();
        let direct = trace.final_energy() - trace.energies[0];
        assert!((total - direct).abs() <= 1e-12 * (1.0 + direct.abs()));
    }

    #[test]
    fn symmetric_pair_counts_as_one_iteration() {
        let system = two_by_two();
        let spec = jacobi_spec(SchemeMethod::DgSymmetric, 2.0);
        let trace = run(&spec, &system, &Vector::zeros(2), 1e-16, 1).unwrap();
        assert_eq!(trace.iterations(), 1);
        let expected = step(&spec, &system, &Vector::zeros(2)).unwrap();
        assert_eq!(trace.final_iterate(), &expected);
    }

    #[test]
    fn euler_converges_exactly_when_the_iteration_matrix_contracts() {
        let system = two_by_two();
        // h = 1: rho(I - A) = 2, divergence with unbounded residual growth.
        let diverging = SchemeSpec::new(
            SchemeMethod::ExplicitEuler,
            Preconditioner::Identity,
            1.0,
        )
        .unwrap();
        let (g, _) = iteration_matrix(&diverging, &system).unwrap();
        assert!((spectral_radius(&g) - 2.0).abs() <= 1e-6);
        let trace = run(&diverging, &system, &Vector::zeros(2), 1e-10, 100).unwrap();
        assert!(!trace.converged);
        assert!(
            trace.final_residual() > 1e6,
            "residual only reached {:e}",
            trace.final_residual()
        );

        // h = 0.4: rho(I - 0.4 A) = 0.6 < 1, convergence.
        let contracting = SchemeSpec::new(
            SchemeMethod::ExplicitEuler,
            Preconditioner::Identity,
            0.4,
        )
        .unwrap();
        let (g, _) = iteration_matrix(&contracting, &system).unwrap();
        assert!((spectral_radius(&g) - 0.6).abs() <= 1e-6);
        let trace = run(&contracting, &system, &Vector::zeros(2), 1e-10, 1_000).unwrap();
        assert!(trace.converged);
        let err = trace.final_iterate().sub(system.solution()).norm_inf();
        assert!(err <= 1e-9, "error {err:e}");
    }

    #[test]
    fn zero_right_hand_side_uses_the_absolute_test() {
        let mut r = rng(101);
        let a = crate::test_util::random_spd_matrix(&mut r, 5);
        let system = SpdSystem::new(a, Vector::zeros(5)).unwrap();
        let x0 = random_vector(&mut r, 5, -1.0, 1.0);
        let trace = run(
            &jacobi_spec(SchemeMethod::DgItohAbe, 2.0),
            &system,
            &x0,
            1e-10,
            10_000,
        )
        .unwrap();
        assert!(trace.converged);
        assert!(trace.final_residual() <= 1e-10);
        assert!(trace.final_iterate().norm_inf() <= 1e-9);
    }

    #[test]
    fn specification_errors_are_reported() {
        let system = two_by_two();
        let bs = system.block_split(&[1]).unwrap();
        let other = system.block_split(&[]).unwrap();

        assert!(matches!(
            SchemeSpec::new(SchemeMethod::DgItohAbe, Preconditioner::JacobiInverse, 0.0),
            Err(Error::InvalidStepsize(_))
        ));
        assert!(matches!(
            SchemeSpec::new(
                SchemeMethod::DgItohAbe,
                Preconditioner::BlockJacobiInverse(bs.clone()),
                1.0
            ),
            Err(Error::IncompatiblePreconditioner(_))
        ));
        assert!(matches!(
            SchemeSpec::new(
                SchemeMethod::DgBlock(bs.clone()),
                Preconditioner::JacobiInverse,
                1.0
            ),
            Err(Error::IncompatiblePreconditioner(_))
        ));
        assert!(matches!(
            SchemeSpec::new(
                SchemeMethod::DgBlock(bs),
                Preconditioner::BlockJacobiInverse(other),
                1.0
            ),
            Err(Error::IncompatiblePreconditioner(_))
        ));
    }

    #[test]
    fn midpoint_contracts_for_every_stepsize() {
        let mut r = rng(103);
        let system = random_system(&mut r, 6);
        for h in [0.01, 1.0, 64.0] {
            let spec =
                SchemeSpec::new(SchemeMethod::DgMidpoint, Preconditioner::JacobiInverse, h)
                    .unwrap();
            let (g, _) = iteration_matrix(&spec, &system).unwrap();
            let rho = spectral_radius(&g);
            assert!(rho < 1.0, "h={h}: rho {rho}");
        }
    }
}
