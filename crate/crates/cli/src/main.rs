//! `dgsolve`: run SOR-type solvers and their gradient-flow counterparts on
//! SPD systems, verify their equivalence, inspect spectral radii, generate
//! test problems, and check the discrete gradient axioms.
//!
//! Exit codes: `0` success/pass, `1` negative verdict (not converged,
//! check failed), `2` usage or input error.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dgsolve::error::Result;
use dgsolve::problem::{self, Generator, RhsChoice};
use dgsolve::report::{
    to_json, write_trace_csv, AxiomsSummary, EquivSummary, SolveSummary, SpectrumSummary,
};
use dgsolve::{matrix_market, CliError as E};

use dgsor::classical::{classical_iteration_matrix, ClassicalMethod, ClassicalSpec};
use dgsor::discrete_gradient::{check_axioms, DiscreteGradientKind};
use dgsor::equivalence::{check_equivalence, h_to_omega, omega_to_h, EquivalencePair};
use dgsor::linalg::{spectral_radius, BlockSplitting, DenseMatrix, Preconditioner, SpdSystem, Vector};
use dgsor::scheme::{iteration_matrix, IterationTrace, SchemeMethod, SchemeSpec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(
    name = "dgsolve",
    version,
    about = "SOR-type solvers for SPD systems, viewed as discrete gradient integrators"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and print a JSON summary (optionally a CSV trace)
    Solve(SolveArgs),
    /// Verify a scheme/classical equivalence pair on a concrete system
    Equiv(EquivArgs),
    /// Print the spectral radius of a method's iteration matrix
    Spectrum(SpectrumArgs),
    /// Generate a problem and write it to Matrix Market files
    Gen(GenArgs),
    /// Check the discrete gradient axioms on random state pairs
    Axioms(AxiomsArgs),
}

/// Where the system comes from: Matrix Market files or a built-in family.
#[derive(Args)]
struct SourceArgs {
    /// Matrix Market file with the system matrix
    #[arg(long, value_name = "PATH", conflicts_with = "gen")]
    matrix: Option<PathBuf>,

    /// Built-in problem family
    #[arg(long, value_enum, value_name = "KIND")]
    gen: Option<GenKind>,

    /// Problem size: matrix order, or grid side for laplacian2d
    #[arg(long, default_value_t = 16, value_name = "N")]
    n: usize,

    /// Right-hand side: 'ones' (b = A*1, exact solution all ones),
    /// 'random', or a Matrix Market file path [default: ones]
    #[arg(long, value_name = "SPEC")]
    rhs: Option<String>,

    /// Seed for randomized problems and states
    #[arg(long, env = "DGSOLVE_SEED", default_value_t = 0, value_name = "SEED")]
    seed: u64,
}

impl SourceArgs {
    fn rhs_choice(&self) -> Option<RhsChoice> {
        self.rhs.as_deref().map(|spec| match spec {
            "ones" | "ones-solution" => RhsChoice::OnesSolution,
            "random" => RhsChoice::Random,
            path => RhsChoice::File(PathBuf::from(path)),
        })
    }

    fn load(&self) -> Result<SpdSystem> {
        match (&self.matrix, self.gen) {
            (Some(path), None) => problem::load_system(path, self.rhs_choice().as_ref()),
            (None, Some(kind)) => problem::generate_system(
                kind.into(),
                self.n,
                &self.rhs_choice().unwrap_or(RhsChoice::OnesSolution),
                self.seed,
            ),
            (None, None) => Err(E::usage(
                "no system given: provide --matrix <PATH> or --gen <KIND>",
            )),
            (Some(_), Some(_)) => unreachable!("clap rejects --matrix with --gen"),
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GenKind {
    #[value(name = "laplacian1d")]
    Laplacian1d,
    #[value(name = "laplacian2d")]
    Laplacian2d,
    #[value(name = "random-spd")]
    RandomSpd,
}

impl From<GenKind> for Generator {
    fn from(kind: GenKind) -> Self {
        match kind {
            GenKind::Laplacian1d => Generator::Laplacian1d,
            GenKind::Laplacian2d => Generator::Laplacian2d,
            GenKind::RandomSpd => Generator::RandomSpd,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum MethodArg {
    /// Forward discrete-gradient sweep (SOR's flow form)
    #[value(name = "dg-ia")]
    DgIa,
    /// Backward discrete-gradient sweep
    #[value(name = "dg-ia-rev")]
    DgIaRev,
    /// Forward-then-backward sweep (SSOR's flow form)
    #[value(name = "dg-sym")]
    DgSym,
    /// Blockwise sweep (block SOR's flow form)
    #[value(name = "dg-block")]
    DgBlock,
    /// Implicit midpoint rule
    #[value(name = "dg-mid")]
    DgMid,
    /// Explicit Euler (non-dissipative)
    #[value(name = "euler")]
    Euler,
    #[value(name = "sor")]
    Sor,
    #[value(name = "gauss-seidel", alias = "gs")]
    GaussSeidel,
    #[value(name = "ssor")]
    Ssor,
    #[value(name = "block-sor")]
    BlockSor,
}

impl MethodArg {
    fn is_scheme(self) -> bool {
        matches!(
            self,
            Self::DgIa | Self::DgIaRev | Self::DgSym | Self::DgBlock | Self::DgMid | Self::Euler
        )
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum PrecondArg {
    #[value(name = "identity")]
    Identity,
    #[value(name = "jacobi")]
    Jacobi,
    #[value(name = "block-jacobi")]
    BlockJacobi,
}

/// Method-selection flags shared by `solve` and `spectrum`.
#[derive(Args)]
struct MethodArgs {
    /// Iteration method
    #[arg(long, value_enum)]
    method: MethodArg,

    /// Preconditioner for the flow schemes
    /// [default: jacobi; block-jacobi for dg-block]
    #[arg(long = "p", value_enum, value_name = "PRECOND")]
    p: Option<PrecondArg>,

    /// Stepsize for the flow schemes (mapped to omega for classical methods)
    #[arg(long, value_name = "H", conflicts_with = "omega")]
    h: Option<f64>,

    /// Relaxation parameter for classical methods (mapped to h for the
    /// dissipative schemes)
    #[arg(long, value_name = "OMEGA")]
    omega: Option<f64>,

    /// Contiguous block size for block methods and block-jacobi
    #[arg(long, value_name = "K")]
    block_size: Option<usize>,
}

/// A method resolved against a concrete system, with the parameter that
/// goes into the report (`h` for schemes, `omega` for classical methods).
enum Resolved {
    Scheme(SchemeSpec, f64),
    Classical(ClassicalSpec, f64),
}

impl Resolved {
    fn name(&self) -> &'static str {
        match self {
            Self::Scheme(spec, _) => spec.method.name(),
            Self::Classical(spec, _) => spec.method.name(),
        }
    }

    fn parameter(&self) -> f64 {
        match self {
            Self::Scheme(_, p) | Self::Classical(_, p) => *p,
        }
    }

    fn matrices(&self, system: &SpdSystem) -> Result<(DenseMatrix, Vector)> {
        Ok(match self {
            Self::Scheme(spec, _) => iteration_matrix(spec, system)?,
            Self::Classical(spec, _) => classical_iteration_matrix(spec, system)?,
        })
    }

    fn run(
        &self,
        system: &SpdSystem,
        x0: &Vector,
        tol: f64,
        max_iters: usize,
    ) -> Result<IterationTrace> {
        Ok(match self {
            Self::Scheme(spec, _) => dgsor::scheme::run(spec, system, x0, tol, max_iters)?,
            Self::Classical(spec, _) => dgsor::classical::run(spec, system, x0, tol, max_iters)?,
        })
    }
}

fn uniform_blocks(system: &SpdSystem, block_size: Option<usize>) -> Result<BlockSplitting> {
    let k = block_size
        .ok_or_else(|| E::usage("block methods require --block-size <K>"))?;
    if k == 0 {
        return Err(E::usage("--block-size must be at least 1"));
    }
    let boundaries: Vec<usize> = (k..system.n()).step_by(k).collect();
    Ok(system.block_split(&boundaries)?)
}

impl MethodArgs {
    fn resolve(&self, system: &SpdSystem) -> Result<Resolved> {
        if self.method.is_scheme() {
            let h = match (self.h, self.omega) {
                (Some(h), None) => h,
                (None, Some(w)) => {
                    if self.method == MethodArg::Euler {
                        return Err(E::usage(
                            "explicit euler takes --h; the omega map applies only to the dissipative sweeps",
                        ));
                    }
                    omega_to_h(w)?
                }
                (None, None) => {
                    return Err(E::usage("provide exactly one of --h or --omega"))
                }
                (Some(_), Some(_)) => unreachable!("clap rejects --h with --omega"),
            };
            let method = match self.method {
                MethodArg::DgIa => SchemeMethod::DgItohAbe,
                MethodArg::DgIaRev => SchemeMethod::DgItohAbeReverse,
                MethodArg::DgSym => SchemeMethod::DgSymmetric,
                MethodArg::DgBlock => {
                    SchemeMethod::DgBlock(uniform_blocks(system, self.block_size)?)
                }
                MethodArg::DgMid => SchemeMethod::DgMidpoint,
                MethodArg::Euler => SchemeMethod::ExplicitEuler,
                _ => unreachable!("is_scheme"),
            };
            let default_p = if self.method == MethodArg::DgBlock {
                PrecondArg::BlockJacobi
            } else {
                PrecondArg::Jacobi
            };
            let precond = match self.p.unwrap_or(default_p) {
                PrecondArg::Identity => Preconditioner::Identity,
                PrecondArg::Jacobi => Preconditioner::JacobiInverse,
                PrecondArg::BlockJacobi => {
                    Preconditioner::BlockJacobiInverse(uniform_blocks(system, self.block_size)?)
                }
            };
            Ok(Resolved::Scheme(SchemeSpec::new(method, precond, h)?, h))
        } else {
            if self.p.is_some() {
                return Err(E::usage(
                    "--p applies to the flow schemes; classical methods have no preconditioner",
                ));
            }
            let omega = match (self.h, self.omega) {
                (None, Some(w)) => w,
                (Some(h), None) => h_to_omega(h)?,
                (None, None) => {
                    if self.method == MethodArg::GaussSeidel {
                        1.0
                    } else {
                        return Err(E::usage("provide exactly one of --omega or --h"));
                    }
                }
                (Some(_), Some(_)) => unreachable!("clap rejects --h with --omega"),
            };
            let method = match self.method {
                MethodArg::Sor => ClassicalMethod::Sor,
                MethodArg::GaussSeidel => ClassicalMethod::GaussSeidel,
                MethodArg::Ssor => ClassicalMethod::Ssor,
                MethodArg::BlockSor => {
                    ClassicalMethod::BlockSor(uniform_blocks(system, self.block_size)?)
                }
                _ => unreachable!("!is_scheme"),
            };
            Ok(Resolved::Classical(ClassicalSpec::new(method, omega)?, omega))
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[command(flatten)]
    method: MethodArgs,

    /// Relative residual tolerance (absolute when b = 0)
    #[arg(long, default_value_t = 1e-10, value_name = "TOL")]
    tol: f64,

    /// Iteration budget
    #[arg(long, default_value_t = 10_000, value_name = "MAX")]
    max_iters: usize,

    /// Write the iteration trace (k,energy,residual,decrement) to this CSV file
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
}

fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    if args.tol <= 0.0 || !args.tol.is_finite() {
        return Err(E::usage("--tol must be positive"));
    }
    if args.max_iters == 0 {
        return Err(E::usage("--max-iters must be at least 1"));
    }
    let system = args.source.load()?;
    let resolved = args.method.resolve(&system)?;
    let x0 = Vector::zeros(system.n());
    let trace = resolved.run(&system, &x0, args.tol, args.max_iters)?;
    let (g, _) = resolved.matrices(&system)?;
    let rho = spectral_radius(&g);

    if let Some(path) = &args.trace {
        let mut writer = BufWriter::new(File::create(path)?);
        write_trace_csv(&mut writer, &trace)?;
    }

    let summary = SolveSummary {
        method: resolved.name().to_string(),
        parameter: resolved.parameter(),
        iterations: trace.iterations(),
        final_residual: trace.final_residual(),
        spectral_radius: rho,
        converged: trace.converged,
    };
    print!("{}", to_json(&summary));
    Ok(if trace.converged { 0 } else { 1 })
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum PairArg {
    /// Forward sweep vs SOR
    #[value(name = "sor")]
    Sor,
    /// Symmetric sweep vs SSOR
    #[value(name = "ssor")]
    Ssor,
    /// Block sweep vs block SOR
    #[value(name = "block-sor")]
    BlockSor,
}

#[derive(Args)]
struct EquivArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Equivalence pair to verify
    #[arg(long, value_enum)]
    pair: PairArg,

    /// Relaxation parameter (in (0, 2))
    #[arg(long, value_name = "OMEGA", conflicts_with = "h")]
    omega: Option<f64>,

    /// Stepsize, mapped to omega
    #[arg(long, value_name = "H")]
    h: Option<f64>,

    /// Number of side-by-side iterates to compare
    #[arg(long, default_value_t = 200, value_name = "COUNT")]
    iterations: usize,

    /// Contiguous block size for the block pair
    #[arg(long, value_name = "K")]
    block_size: Option<usize>,
}

fn cmd_equiv(args: &EquivArgs) -> Result<i32> {
    let system = args.source.load()?;
    let omega = match (args.h, args.omega) {
        (None, Some(w)) => w,
        (Some(h), None) => h_to_omega(h)?,
        (None, None) => return Err(E::usage("provide exactly one of --omega or --h")),
        (Some(_), Some(_)) => unreachable!("clap rejects --h with --omega"),
    };
    let pair = match args.pair {
        PairArg::Sor => EquivalencePair::ItohAbeSor,
        PairArg::Ssor => EquivalencePair::SymmetricSsor,
        PairArg::BlockSor => {
            EquivalencePair::BlockSorPair(uniform_blocks(&system, args.block_size)?)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.source.seed);
    let x0 = Vector::from_vec(
        (0..system.n())
            .map(|_| rng.gen_range(-1.0..1.0))
            .collect(),
    );
    let report = check_equivalence(&pair, &system, omega, &x0, args.iterations)?;
    let summary = EquivSummary {
        pair: pair.name().to_string(),
        omega,
        h: omega_to_h(omega)?,
        matrix_gap: report.matrix_gap,
        vector_gap: report.vector_gap,
        sequence_gap: report.sequence_gap,
        matrix_tolerance: report.matrix_tolerance,
        sequence_tolerance: report.sequence_tolerance,
        passed: report.passed,
    };
    print!("{}", to_json(&summary));
    Ok(if report.passed { 0 } else { 1 })
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    source: SourceArgs,

    #[command(flatten)]
    method: MethodArgs,
}

fn cmd_spectrum(args: &SpectrumArgs) -> Result<i32> {
    let system = args.source.load()?;
    let resolved = args.method.resolve(&system)?;
    let (g, _) = resolved.matrices(&system)?;
    let rho = spectral_radius(&g);
    let summary = SpectrumSummary {
        method: resolved.name().to_string(),
        parameter: resolved.parameter(),
        spectral_radius: rho,
        convergent: rho < 1.0,
    };
    print!("{}", to_json(&summary));
    Ok(0)
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Output path for the matrix
    #[arg(long, value_name = "PATH")]
    out_matrix: PathBuf,

    /// Output path for the right-hand side
    #[arg(long, value_name = "PATH")]
    out_rhs: Option<PathBuf>,
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let kind = args
        .source
        .gen
        .ok_or_else(|| E::usage("gen requires --gen <KIND>"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.source.seed);
    let a = problem::generate_matrix(kind.into(), args.source.n, &mut rng)?;
    let b = problem::build_rhs(
        &a,
        &args.source.rhs_choice().unwrap_or(RhsChoice::OnesSolution),
        &mut rng,
    )?;
    // Enforce the generator invariant before anything reaches disk.
    let system = SpdSystem::new(a, b)?;
    matrix_market::write_matrix_file(&args.out_matrix, system.a())?;
    eprintln!(
        "wrote {} ({} x {})",
        args.out_matrix.display(),
        system.n(),
        system.n()
    );
    if let Some(path) = &args.out_rhs {
        matrix_market::write_vector_file(path, system.b())?;
        eprintln!("wrote {} ({} x 1)", path.display(), system.n());
    }
    Ok(0)
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    #[value(name = "itoh-abe")]
    ItohAbe,
    #[value(name = "itoh-abe-rev")]
    ItohAbeRev,
    #[value(name = "gonzalez")]
    Gonzalez,
    #[value(name = "avf", alias = "average-vector-field")]
    Avf,
    #[value(name = "block-itoh-abe")]
    BlockItohAbe,
}

#[derive(Args)]
struct AxiomsArgs {
    #[command(flatten)]
    source: SourceArgs,

    /// Discrete gradient kind
    #[arg(long, value_enum)]
    kind: KindArg,

    /// Number of random state pairs
    #[arg(long, default_value_t = 1000, value_name = "COUNT")]
    pairs: usize,

    /// Contiguous block size for block-itoh-abe
    #[arg(long, value_name = "K")]
    block_size: Option<usize>,
}

fn cmd_axioms(args: &AxiomsArgs) -> Result<i32> {
    if args.pairs == 0 {
        return Err(E::usage("--pairs must be at least 1"));
    }
    let system = args.source.load()?;
    let kind = match args.kind {
        KindArg::ItohAbe => DiscreteGradientKind::ItohAbe,
        KindArg::ItohAbeRev => DiscreteGradientKind::ItohAbeReverse,
        KindArg::Gonzalez => DiscreteGradientKind::Gonzalez,
        KindArg::Avf => DiscreteGradientKind::AverageVectorField,
        KindArg::BlockItohAbe => {
            DiscreteGradientKind::BlockItohAbe(uniform_blocks(&system, args.block_size)?)
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.source.seed);
    let mut draw = |n: usize| {
        Vector::from_vec((0..n).map(|_| rng.gen_range(-5.0..5.0)).collect())
    };
    let mut max_chain = 0.0f64;
    let mut max_consistency = 0.0f64;
    let mut max_tolerance = 0.0f64;
    let mut passed = true;
    for _ in 0..args.pairs {
        let x = draw(system.n());
        let y = draw(system.n());
        let report = check_axioms(&kind, &system, &x, &y)?;
        max_chain = max_chain.max(report.chain_rule_residual);
        max_consistency = max_consistency.max(report.consistency_residual);
        max_tolerance = max_tolerance.max(report.tolerance);
        passed &= report.passed;
    }
    let summary = AxiomsSummary {
        kind: kind.name().to_string(),
        pairs: args.pairs,
        max_chain_rule_residual: max_chain,
        max_consistency_residual: max_consistency,
        max_tolerance,
        passed,
    };
    print!("{}", to_json(&summary));
    Ok(if passed { 0 } else { 1 })
}

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Equiv(args) => cmd_equiv(args),
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Gen(args) => cmd_gen(args),
        Command::Axioms(args) => cmd_axioms(args),
    };
    match result {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            eprintln!("error: {err}");
            std::process::exit(2);
        }
    }
}
