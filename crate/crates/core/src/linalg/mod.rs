//! Dense linear-algebra kernels sized for desk-scale experiments.

mod dense;
mod flow;
mod lu;
mod precond;
mod spd;
mod spectral;
mod splitting;

pub use dense::{DenseMatrix, Vector};
pub use flow::{exact_flow, matrix_exp};
pub use lu::{lu_solve, LuFactors, PIVOT_RTOL};
pub use precond::Preconditioner;
pub use spd::{certify_spd, cholesky, SpdSystem};
pub use spectral::{spectral_radius, GELFAND_MAX_SQUARINGS, GELFAND_RTOL};
pub use splitting::{BlockSplitting, Splitting};
