//! Error type shared by all solver components.

use std::fmt;

/// Errors produced by network construction, the numerical kernels and the
/// solvers. All variants carry enough context to be actionable from a CLI
/// message.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input failed validation (value range, unknown vertex, bad config, ...).
    InvalidInput(String),
    /// Vector or matrix dimensions do not agree.
    DimensionMismatch { expected: usize, found: usize },
    /// A linear system has no usable pivot.
    SingularMatrix { pivot: f64 },
    /// An iterative method exhausted its iteration budget.
    NoConvergence {
        iterations: usize,
        last_estimate: f64,
    },
    /// The requested computation has no feasible point.
    Infeasible(String),
    /// A numerical failure that indicates a pathological instance or a bug.
    Numerical(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::SingularMatrix { pivot } => {
                write!(
                    f,
                    "singular matrix: pivot magnitude {pivot:.3e} below threshold"
                )
            }
            Error::NoConvergence {
                iterations,
                last_estimate,
            } => write!(
                f,
                "no convergence after {iterations} iterations (last estimate {last_estimate:.6e})"
            ),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::Numerical(msg) => write!(f, "numerical failure: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
