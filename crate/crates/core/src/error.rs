use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the analysis routines. Numeric payloads are widened to
/// `f64` so the type does not depend on the scalar in use.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series too short: need at least {required} samples, got {actual}")]
    TooShort { required: usize, actual: usize },
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("non-positive price {value} at index {index}")]
    NonPositivePrice { index: usize, value: f64 },
    #[error("series has zero variance")]
    ZeroVariance,
    #[error("scale {scale} exceeds the maximum {max} allowed for a series of length {len}")]
    ScaleTooLarge { scale: usize, max: usize, len: usize },
    #[error("scale {scale} is below the minimum {min}")]
    ScaleTooSmall { scale: usize, min: usize },
    #[error("overlap {overlap} violates 0 < l < s/2 for scale {scale}")]
    BadOverlap { overlap: usize, scale: usize },
    #[error("detrending order {order} outside 1..=5")]
    BadOrder { order: usize },
    #[error("window of length {length} needs at least {required} samples for this detrending order")]
    WindowTooShort { length: usize, required: usize },
    #[error("window [{start}, {end}) exceeds series of length {len}")]
    WindowOutOfBounds { start: usize, end: usize, len: usize },
    #[error("no window variances to average")]
    EmptyWindows,
    #[error("zero window variance makes the q = {q} moment diverge")]
    ZeroVarianceWithNegativeQ { q: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("only {available} usable scales in the fit range, need {required}")]
    TooFewScales { available: usize, required: usize },
    #[error("flagged fluctuation value at q = {q}, s = {scale} inside the fit range")]
    FlaggedColumnInRange { q: f64, scale: usize },
    #[error("q grid has {len} points, need at least {required}")]
    GridTooSmall { len: usize, required: usize },
    #[error("bad generator spec: {0}")]
    BadSpec(String),
    #[error("cascade weight p = {p} outside [0.5, 1)")]
    BadP { p: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
