use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("truncation overflow: result needs m = {needed} but the cap is m_max = {m_max}")]
    TruncationOverflow { needed: i64, m_max: u32 },

    #[error("truncation too small: need m_max >= {needed}, got {m_max}")]
    TruncationTooSmall { needed: u32, m_max: u32 },

    #[error("unknown element {0:?}")]
    UnknownElement(String),

    #[error("unknown relation {0:?}")]
    UnknownRelation(String),

    #[error("unknown preset {0:?}")]
    UnknownPreset(String),

    #[error("invalid superalgebra spec: {0}")]
    SpecInvalid(String),

    #[error("subspace V({m},{n}) has dimension zero")]
    DimensionZero { m: i64, n: i64 },

    #[error("Gram matrix of V({m},{n}) is not positive definite")]
    GramDegenerate { m: u32, n: u32 },

    #[error("no closed form is implemented for {0}")]
    NoClosedForm(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, FockError>;
