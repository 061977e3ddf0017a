//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("too few nodes: need at least {needed} segments, got {got}")]
    TooFewNodes { needed: usize, got: usize },

    #[error("degenerate curve: consecutive nodes {index} and {} coincide", index + 1)]
    DegenerateCurve { index: usize },

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: &'static str },

    #[error("banded solve failed: zero pivot at row {row}")]
    SingularSolve { row: usize },

    #[error("need at least {needed} records, got {got}")]
    InsufficientRecords { needed: usize, got: usize },

    #[error("trajectory has no curve snapshots at record times")]
    MissingSnapshots,

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("function is identically zero")]
    ZeroFunction,

    #[error("field is not positive over the fit window")]
    NonPositiveField,

    #[error("closure integral stayed non-positive after {attempts} attempts")]
    ClosureFailed { attempts: usize },

    #[error("winding must be a nonzero multiple of 1/2, got {omega}")]
    InvalidWinding { omega: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
