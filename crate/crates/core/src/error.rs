use crate::antisym::Condition;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index out of range: {0}")]
    Index(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("state has vanishing norm ({norm:e} <= {tol:e})")]
    ZeroState { norm: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("input is not normalized (norm {norm:.17})")]
    Normalization { norm: f64 },

    /// The requested state degenerates to 0/0. `factor` is the vanishing
    /// quantity that triggered the verdict.
    #[error("excluded state ({condition}): vanishing factor {factor:e}")]
    Excluded { condition: Condition, factor: f64 },

    #[error("amplitude matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("label error: {0}")]
    Label(String),

    #[error("symmetry precondition violated: {0}")]
    Symmetry(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("duplicate record at line {line}: {msg}")]
    Duplicate { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
