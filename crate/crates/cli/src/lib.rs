//! Library surface of the `dgsolve` command-line tool: Matrix Market
//! ingestion and serialization, built-in problem generators, and the
//! report/trace formats shared by the subcommands. The command dispatch
//! itself lives in the binary.

pub mod error;
pub mod matrix_market;
pub mod problem;
pub mod report;

pub use error::{CliError, Result};
