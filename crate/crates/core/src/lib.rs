//! Stationary SOR-type solvers for SPD linear systems, viewed as discrete
//! gradient integrators of the quadratic energy `f(x) = x'Ax/2 - x'b`.
//!
//! The crate has two solver families that are provably the same object under
//! a stepsize/relaxation reparametrization, and keeps both implementations
//! deliberately independent so the correspondence can be checked
//! numerically:
//!
//! * [`scheme`] — one-step integrators for the gradient flow
//!   `dx/dt = -P (Ax - b)` built from discrete gradients (Itoh–Abe sweeps,
//!   their reverse and symmetrized variants, block sweeps, implicit
//!   midpoint) plus the explicit Euler method as the non-dissipative
//!   counterexample.
//! * [`classical`] — textbook SOR, Gauss–Seidel, SSOR and block SOR written
//!   as relaxation sweeps.
//!
//! Supporting modules: [`linalg`] (dense kernels: pivoted LU, Cholesky
//! certification, splittings, spectral radius, matrix exponential),
//! [`energy`] (the quadratic energy, its gradient, per-component decrease),
//! [`discrete_gradient`] (discrete-gradient maps and their defining
//! identities), and [`equivalence`] (the stepsize map `h = 2w/(2-w)` and
//! side-by-side comparisons of the two families).

pub mod classical;
pub mod discrete_gradient;
pub mod energy;
pub mod equivalence;
mod error;
pub mod linalg;
pub mod scheme;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
