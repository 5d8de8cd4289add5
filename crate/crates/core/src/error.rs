//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation outside a patch, profile or chart domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Not enough interior room for a finite-difference stencil.
    #[error("insufficient margin for finite differences: {0}")]
    Margin(String),

    /// Vanishing tangent cross product where a normal or curvature is needed.
    #[error("singular point: {0}")]
    Singular(String),

    /// Zero-speed generating curve; the arc coordinate is not monotone.
    #[error("degenerate generating curve: {0}")]
    Degenerate(String),

    /// A radicand is negative on the named parameter interval.
    #[error("domain violation: {what} is negative on [{lo}, {hi}]")]
    DomainViolation { what: String, lo: f64, hi: f64 },

    /// Parameter constraints leave no room below the requested cap.
    #[error("empty parameter domain: {0}")]
    EmptyDomain(String),

    /// Two surfaces share no coordinate window.
    #[error("no common coordinate window: {0}")]
    NoCommonWindow(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
