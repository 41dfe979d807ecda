//! Error type for the command-line front end.
//!
//! The process exit contract is: `0` when the command completed and its
//! verdict is positive, `1` when it completed with a negative verdict
//! (not converged, equivalence or axiom check failed), `2` when the command
//! could not be carried out at all — usage mistakes, unreadable or malformed
//! input, invalid solver configuration. Every `CliError` therefore maps to
//! exit code `2`; negative verdicts are not errors and are produced by the
//! command handlers directly.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed Matrix Market input; `line` is 1-based.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Valid Matrix Market field that this tool does not handle.
    #[error("unsupported matrix market field '{0}': only 'real' is supported")]
    UnsupportedField(String),

    /// Valid Matrix Market symmetry that this tool does not handle.
    #[error("unsupported matrix market symmetry '{0}': only 'general' and 'symmetric' are supported")]
    UnsupportedSymmetry(String),

    /// Invalid system or solver configuration, reported by the library.
    #[error("solver error: {0}")]
    Solver(#[from] dgsor::Error),

    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        Self::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::Usage(message.into())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
