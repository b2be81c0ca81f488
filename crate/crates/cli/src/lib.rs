//! Command-line harness for `orbit-embed`: property suites, witness
//! extraction on instance files, invariant tables, the GL2 case study and
//! seeded fuzzing. JSON in, JSON (or text) out.
//!
//! Exit codes: 0 pass, 1 property or residual failure, 2 input error,
//! 3 theorem violation.

pub mod commands;
pub mod config;
pub mod instance;
pub mod properties;
pub mod seeds;
pub mod suite;

use thiserror::Error;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_THEOREM: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] orbit_embed::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Core(e) => core_exit_code(e),
        }
    }
}

/// Malformed or out-of-contract inputs exit 2; failed residual checks 1.
pub fn core_exit_code(e: &orbit_embed::Error) -> i32 {
    use orbit_embed::Error::*;
    match e {
        Parse(_)
        | Precondition(_)
        | DimensionMismatch(_)
        | NotSquare { .. }
        | Singular
        | UnsupportedConstraint(_)
        | WrongMode { .. } => EXIT_INPUT,
        TheoremViolation(_) => EXIT_THEOREM,
        Residual { .. } | NoConvergence => EXIT_FAILURE,
    }
}
