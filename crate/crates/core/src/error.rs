use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation (NaN, negative
    /// time, amplitude above the physical bound, and similar).
    #[error("domain error: {0}")]
    Domain(String),

    /// Structurally invalid parameters (non-positive coupling, degenerate
    /// grids, out-of-range state coefficients).
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// An iterative procedure failed to settle within its budget.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// A time-domain classification could not be made because the curve was
    /// still evolving at the end of the requested horizon.
    #[error("horizon too short: {0}")]
    HorizonTooShort(String),

    /// Requested oracle settings exceed the resource caps.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
