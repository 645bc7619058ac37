use thiserror::Error;

/// Errors raised by the chaos algebra and the verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid time grid: horizon {horizon}, cells {cells}")]
    InvalidGrid { horizon: f64, cells: usize },
    #[error("L2 functions live on different grids")]
    GridMismatch,
    #[error("coefficient vector has length {got}, grid has {expected} cells")]
    CoefficientLength { expected: usize, got: usize },
    #[error("time {t} is not a node of the grid (T = {horizon}, m = {cells})")]
    OffNode { t: f64, horizon: f64, cells: usize },
    #[error("mode count mismatch: {left} vs {right}")]
    ModeMismatch { left: usize, right: usize },
    #[error("order cap mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("multi-index has {got} entries, expected {expected}")]
    IndexLength { expected: usize, got: usize },
    #[error("order cap {0} exceeds the supported maximum {max}", max = crate::chaos::MAX_ORDER)]
    OrderTooLarge(usize),
    #[error("a first-chaos element needs order cap >= 1")]
    ZeroOrder,
    #[error("second quantization scale must be positive, got {0}")]
    NonPositiveScale(f64),
    #[error("G_lambda norm requires lambda >= 1, got {0}")]
    NormScaleBelowOne(f64),
    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("phi series must satisfy phi(0) = 1, got a0 = {0}")]
    PhiNotNormalized(f64),
    #[error("evaluation point has {got} entries, expected {expected}")]
    PointLength { expected: usize, got: usize },
    #[error("time must be positive, got {0}")]
    NonPositiveTime(f64),
    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("malformed chaos vector: {0}")]
    Decode(String),
}

pub type Result<T> = std::result::Result<T, Error>;
