//! The crate-wide error type.
//!
//! Every operation in the solver reports failures through [`SolverError`].
//! The variants mirror the distinct failure modes of the numerical
//! machinery: domain violations, series non-convergence, configuration
//! guards, precision exhaustion, and search failures.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum SolverError {
    /// An argument lies outside a function's mathematical domain (for
    /// example a confluent-hypergeometric denominator parameter hitting a
    /// non-positive integer before the series terminates).
    #[error("domain error: {0}")]
    Domain(String),

    /// A series failed to reach the requested relative tolerance within the
    /// configured term budget or precision cap.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// The requested evaluation needs the logarithmic second-solution path
    /// that is intentionally not implemented; callers must perturb μ away
    /// from the half-integer degeneracy instead.
    #[error("not implemented fallback: {0}")]
    NotImplementedFallback(String),

    /// A configuration guard rejected the request (for example the
    /// Whittaker coordinate at the origin exceeding the configured series
    /// safety bound, or an evaluation point beyond the render window).
    #[error("guard violated: {0}")]
    Guard(String),

    /// The 2×2 origin-condition system could not be solved reliably at the
    /// available precision.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// The scan found fewer levels in the sector than the requested index.
    #[error("no such level: {0}")]
    NoSuchLevel(String),

    /// The requested bracket tolerance is below what double-precision
    /// endpoints can certify.
    #[error("precision floor: {0}")]
    PrecisionFloor(String),

    /// Node counting could not resolve the sign structure on the supplied
    /// grid.
    #[error("grid too coarse: {0}")]
    GridTooCoarse(String),

    /// A boundary-matching basis was numerically singular at the matching
    /// point.
    #[error("singular transfer: {0}")]
    SingularTransfer(String),

    /// A segment chain violates its structural invariants.
    #[error("invalid chain: {0}")]
    InvalidChain(String),
}
