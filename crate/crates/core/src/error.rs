use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arm {arm} out of range for a {arms}-armed problem")]
    ArmOutOfRange { arm: usize, arms: usize },

    #[error("inconsistent input: {0}")]
    Inconsistent(String),

    /// A caller broke a precondition that the policy layer is supposed to
    /// guarantee, e.g. asking for a bootstrap value of an unpulled arm.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("outside the domain of the bound: {0}")]
    Domain(String),

    #[error("too large for exact evaluation: {0}")]
    TooLarge(String),

    #[error("dataset line {line}: {msg}")]
    Load { line: u64, msg: String },

    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
