use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypoError {
    #[error("parse error in {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("coframe dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid SU(2)-structure: {0}")]
    InvalidStructure(String),

    #[error("torsion does not have the hypo pattern: {0}")]
    NotHypo(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("{what}: residual {value:e} exceeds tolerance {tol:e}")]
    Residual { what: String, value: f64, tol: f64 },

    #[error("3-form is not simple (annihilator has dimension {0})")]
    NonSimple(usize),

    #[error("catalog error: {0}")]
    Catalog(String),

    #[error("integration failed at t = {t}: {reason}")]
    Integration { t: f64, reason: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, HypoError>;

pub(crate) fn parse_err(input: &str, reason: impl Into<String>) -> HypoError {
    HypoError::Parse {
        input: input.to_string(),
        reason: reason.into(),
    }
}
