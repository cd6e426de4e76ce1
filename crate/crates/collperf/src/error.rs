//! Error types shared across the crate.

use thiserror::Error;

/// Error raised while reading a parameter or measurement file.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// A malformed or invalid line, reported with its 1-based line number.
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    /// A whole-table invariant violation (too few rows, missing size-1 row, ...).
    #[error("{0}")]
    Invalid(String),
}

impl ParseError {
    pub(crate) fn at(line: usize, message: impl Into<String>) -> Self {
        ParseError::Line {
            line,
            message: message.into(),
        }
    }
}

/// Error raised by model evaluation, optimization, simulation or selection.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("process count must be at least 2 (got {0})")]
    InvalidProcessCount(u32),
    #[error("message size must be at least 1 byte")]
    InvalidMessageSize,
    #[error("invalid segment: {0}")]
    InvalidSegment(String),
    #[error("bandwidth must be positive")]
    InvalidBandwidth,
    #[error("a contention model is required for the contended all-to-all prediction")]
    GammaRequired,
    #[error("candidate set is empty")]
    EmptyCandidates,
    #[error("strategy {strategy} does not belong to family {family}")]
    FamilyMismatch { strategy: String, family: String },
    #[error("measurement set is empty")]
    EmptyMeasurements,
    #[error("all measurements are degenerate (upper bound equals lower bound)")]
    DegenerateMeasurements,
    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),
}
