//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Problem construction rejected (bounds, minimizer placement, ...).
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    /// A point fell outside the admissible box.
    #[error("coordinate {index} = {value} outside [{lo}, {hi}]")]
    OutOfDomain {
        index: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },

    /// The objective returned NaN or an infinity.
    #[error("objective returned a non-finite value at {point:?}")]
    NonFiniteObjective { point: Vec<f64> },

    /// Ternary coordinate depth would exceed the configured cap.
    #[error("subdivision depth limit of {max} exceeded")]
    DepthExceeded { max: u8 },

    /// Bad argument to an operation (non-positive slope estimate, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Test-class generation could not satisfy its placement constraints.
    #[error("generation failed: {0}")]
    Generation(String),

    /// Unknown benchmark function name.
    #[error("unknown test function `{0}`")]
    UnknownFunction(String),

    /// Reference report does not match the current run (for win/loss counts).
    #[error("report size mismatch: reference has {reference} entries, run has {run}")]
    ReportMismatch { reference: usize, run: usize },

    /// Malformed report bytes handed to the comparison parser.
    #[error("malformed report: {0}")]
    MalformedReport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
