use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenerator(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed problem file at line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("non-finite value `{token}` at line {line}")]
    NonFinite { line: usize, token: String },

    #[error("instance has I*J = {entries} entries, the oracle accepts at most {limit}; shrink --pairs/--cols")]
    Oversize { entries: usize, limit: usize },

    #[error("oracle did not converge within {0} gradient steps")]
    NotConverged(usize),

    #[error("trace schema error in {path}: {msg}")]
    Schema { path: PathBuf, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
