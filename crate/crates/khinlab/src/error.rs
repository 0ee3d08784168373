use thiserror::Error;

/// Errors produced by the library. Each variant maps to a stable CLI exit
/// code so that scripted callers can branch on failure class.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested enumeration would walk more sign configurations than
    /// the configured bit budget allows.
    #[error("budget exceeded: enumeration needs {required} sign bits, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u32 },

    /// Two inputs that must agree in shape do not.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// The input is structurally valid but degenerate for the operation
    /// (for example a witness with zero moment).
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// Input text or file content could not be decoded.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command line interface.
    /// 2 = domain, 3 = budget, 4 = parse or I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_) | Error::ShapeMismatch(_) | Error::Degenerate(_) => 2,
            Error::BudgetExceeded { .. } => 3,
            Error::Parse(_) | Error::Io(_) => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
