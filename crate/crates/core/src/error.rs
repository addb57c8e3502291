use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("empty domain [{lo},{hi}]")]
    EmptyDomain { lo: i64, hi: i64 },
    #[error("unsupported constraint: {0}")]
    Unsupported(String),
    #[error("malformed DIMACS at line {line}: {msg}")]
    Dimacs { line: usize, msg: String },
    #[error("solver: {0}")]
    Solver(String),
}

pub type Result<T> = std::result::Result<T, Error>;
