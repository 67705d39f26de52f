//! Command-line front end: product computations, named verification cases
//! and exports of `W_n` and envelope hom-size tables.

pub mod app;
pub mod cases;
pub mod expr;
pub mod render;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("cap {cap} exceeds the supported maximum {max}")]
    CapExceeded { cap: usize, max: usize },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Exit code: 2 for anything the caller got wrong, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. } | CliError::CapExceeded { .. } | CliError::Usage(_) => 2,
            CliError::Compute(_) | CliError::Io(_) => 1,
        }
    }
}
