use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Incompatible or invalid ambient parameters (modulus, variable count, `s`).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation received arguments outside its domain.
    #[error("argument error: {0}")]
    Argument(String),

    /// A computation would exceed one of the configured budgets.
    #[error("resource limit: {0}")]
    Resource(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    /// An internal cross-check between two independent routes disagreed.
    #[error("consistency violation: {0}")]
    Consistency(String),
}
