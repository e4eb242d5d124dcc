use alloc::string::String;

use thiserror::Error;

/// Errors raised by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unbounded Taylor tail: at least one operand carries an infinite tail bound")]
    UnboundedTail,
    #[error("Taylor truncation did not reach tolerance {tolerance:e} within degree {cap}")]
    TaylorCap { cap: usize, tolerance: f64 },
    #[error("quadrature grid too coarse: refinement stalled at {achieved:e} (wanted {wanted:e})")]
    GridTooCoarse { achieved: f64, wanted: f64 },
    #[error("sample domain too small: tail bound {tail:e} exceeds tolerance {tolerance:e}")]
    DomainTooSmall { tail: f64, tolerance: f64 },
    #[error("{0} is not a nonzero point of the integer lattice")]
    NotALatticePoint(String),
    #[error("{0} is not a zero of the generating function")]
    NotAZero(String),
    #[error("invalid perturbation: {0}")]
    InvalidPerturbation(String),
    #[error("point set intersects the integer lattice at {0}")]
    LatticeCollision(String),
    #[error("too many points: {count} (limit {limit})")]
    TooManyPoints { count: usize, limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;
