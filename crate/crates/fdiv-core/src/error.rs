//! Error type shared across the library.
//!
//! Construction and planning routines return `Result<_, Error>`; plain
//! evaluation routines (generator calculus, divergences on validated
//! distributions) enforce their numeric preconditions with `assert!` instead,
//! since a violation there is a caller bug rather than a recoverable state.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A numeric argument is outside the documented domain.
    #[error("domain: {0}")]
    Domain(String),

    /// Distribution data failed validation (negative mass, duplicate label,
    /// mass sum further than 1e-9 from 1).
    #[error("invalid distribution: {0}")]
    InvalidDist(String),

    /// A finite truncation level does not exist: the generator's derivative
    /// is bounded and the requested tail bound can never be met.
    #[error("unbounded truncation: {0}")]
    UnboundedTruncation(String),

    /// The truncated target has zero acceptance mass, so no plan can emit it.
    #[error("degenerate truncation: {0}")]
    DegenerateTruncation(String),

    /// A lower-bound construction's validity condition fails for the given
    /// parameters (non-strictly-convex generator, negative atom mass, or a
    /// growth condition that does not hold on the probed range).
    #[error("construction invalid: {0}")]
    ConstructionInvalid(String),

    /// A requested configuration is recognized but outside supported limits.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
