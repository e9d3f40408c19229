use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid covariance matrix: {0}")]
    InvalidCovariance(String),

    #[error("covariance is not a pure two-mode state: det = {det} (expected 1/16)")]
    NotPure { det: f64 },

    #[error("squeezing-enhancement condition is undefined at lambda = 0")]
    UndefinedCondition,

    #[error("Fock cutoff {cutoff} too small: truncation loss {deficit:.3e}")]
    CutoffTooSmall { cutoff: usize, deficit: f64 },

    #[error("invalid Fock cutoff {cutoff}: need at least {min}")]
    InvalidCutoff { cutoff: usize, min: usize },

    #[error("displacement |alpha|^2 = {magnitude} exceeds the safe limit {limit} for this cutoff")]
    DisplacementTooLarge { magnitude: f64, limit: f64 },

    #[error("quadrature domain: {0}")]
    QuadratureDomain(String),

    #[error("invalid input state: {0}")]
    InvalidInput(String),

    #[error("invalid Bell setting: {0}")]
    InvalidSetting(String),
}
