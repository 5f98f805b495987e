use thiserror::Error;

/// Failures raised by the analytic pipelines and the oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A result needs coefficients beyond what the inputs certify.
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    /// A series operation would produce an infinite exact expansion.
    #[error("unbounded expansion: {0} (truncate an operand first)")]
    Unbounded(&'static str),

    #[error("division by a series that vanishes to its validity order")]
    DivisionByZero,

    /// Non-square leading coefficient, log of a series without unit leading term, ...
    #[error("branch obstruction: {0}")]
    BranchObstruction(String),

    #[error("operation not defined on a series carrying a log x term: {0}")]
    LogTerm(&'static str),

    #[error("singular linearization: {0}")]
    Singular(String),

    /// An exact fit left a nonzero residual: the assumed closed form is wrong.
    #[error("fit residual nonzero at x^{exponent}: {context}")]
    FitResidual { exponent: i64, context: String },

    #[error("not enough surplus equations for certification ({found} < {required}): {context}")]
    InsufficientSurplus {
        found: usize,
        required: usize,
        context: String,
    },

    /// A structural identity failed (odd ε grade left over, degree bound broken, ...).
    #[error("identity violated: {0}")]
    Identity(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
