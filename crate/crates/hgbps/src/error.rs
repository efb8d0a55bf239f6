use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid mass parameters: {0}")]
    InvalidMass(String),
    #[error("dimension mismatch: expected {expected} {what}, got {got}")]
    DimensionMismatch { what: &'static str, expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unsupported lattice class: {0}")]
    UnsupportedClass(String),
    #[error("no consistent quadratic refinement: {0}")]
    Inconsistent(String),
    #[error("order {k} exceeds maximum {max}")]
    OrderTooLarge { k: usize, max: usize },
    #[error("argument on branch cut: {0}")]
    BranchCut(String),
    #[error("pole hit: {0}")]
    PoleHit(String),
    #[error("sector boundary ray is BPS at angle {0}")]
    BoundaryIsBps(f64),
    #[error("ray at angle {0} is BPS")]
    RayIsBps(f64),
    #[error("quadrature failed: {0}")]
    QuadratureFail(String),
    #[error("nu outside the validity strip: {0}")]
    NuOutOfStrip(String),
    #[error("jet truncation insufficient: {0}")]
    TruncationInsufficient(String),
    #[error("contour hits pole: {0}")]
    ContourHitsPole(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
