use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the numerical models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid too coarse: width {width} must exceed twice the spacing {spacing}")]
    GridTooCoarse { width: f64, spacing: f64 },

    #[error("grid too narrow: boundary amplitude ratio {ratio:e} exceeds {limit:e}")]
    GridTooNarrow { ratio: f64, limit: f64 },

    #[error("boundary leak: amplitude ratio {ratio:e} at the grid edge exceeds {limit:e}")]
    BoundaryLeak { ratio: f64, limit: f64 },

    #[error("states live on different grids")]
    GridMismatch,

    #[error("superposition has vanishing norm")]
    ZeroNorm,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires a density matrix on a spatial grid")]
    NotSpatial,

    #[error("density matrix invariant violated: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid overlap matrix: {0}")]
    InvalidOverlapMatrix(String),

    #[error("overlap magnitude {0} exceeds 1")]
    InvalidOverlap(f64),

    #[error("degenerate state: no anti-diagonal slice carries weight")]
    DegenerateState,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("parameters outside the validity regime: {0}")]
    RegimeError(String),

    #[error("time step {dt} exceeds the stability bound {bound}")]
    StabilityViolation { dt: f64, bound: f64 },

    #[error("trace drift {drift:e} exceeds {limit:e}")]
    TraceDrift { drift: f64, limit: f64 },

    #[error("input is not Hermitian (residue {0:e})")]
    NonHermitianInput(f64),

    #[error("preset table: {0}")]
    Preset(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Reject non-finite or non-positive values.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::param(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::param(
            name,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}
