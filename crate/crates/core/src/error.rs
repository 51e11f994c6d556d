use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solvers, the bound calculators and the file readers.
#[derive(Debug, Error)]
pub enum OtkError {
    /// An argument is outside its documented domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// Operand shapes do not line up.
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A combinatorial enumeration would exceed its hard limit.
    #[error("enumeration guard: {what} requires {required} cases, limit is {limit}")]
    Guard {
        what: &'static str,
        required: u128,
        limit: u128,
    },

    /// A theoretical hypothesis (RIC bound or parameter window) fails.
    #[error("window violated: {0}")]
    Window(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, OtkError>;

pub(crate) fn check_len(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(OtkError::Dimension {
            context,
            expected,
            actual,
        })
    }
}
