use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis label (n2={n2}, i2={i2}, j2={j2})")]
    InvalidLabel { n2: i64, i2: i64, j2: i64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unsupported on the {branch} branch: {what}")]
    UnsupportedBranch { branch: &'static str, what: String },

    #[error("truncation too small: need n2_max >= {needed}, have {have}")]
    TruncationTooSmall { needed: i64, have: i64 },

    #[error("operator spaces do not match: {0}")]
    SpaceMismatch(String),

    #[error("sector tail not converged: {0}")]
    NotConverged(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("index did not stabilize: {0}")]
    Unstable(String),

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
