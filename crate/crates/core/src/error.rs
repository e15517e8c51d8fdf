use alloc::string::String;
use astro_float::BigFloat;
use core::fmt;

/// Crate-wide result type.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the computational primitives.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition on an argument was violated.
    InvalidArgument(&'static str),
    /// An index fell outside a table or configured range.
    OutOfRange(&'static str),
    /// The mathematical operation is undefined for the given input
    /// (for example a divergent zeta sum).
    Domain(&'static str),
    /// A computation would exceed the configured resource cap.
    SizeCapExceeded { vertices: u64, cap: u64 },
    /// The requested expansion order is not available.
    UnsupportedOrder { order: usize, max: usize },
    /// Adaptive refinement stopped before reaching the requested accuracy.
    /// Carries the best estimate obtained.
    AccuracyNotReached {
        best: BigFloat,
        requested_rel_tol: f64,
        note: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(what) => write!(f, "invalid argument: {what}"),
            Error::OutOfRange(what) => write!(f, "out of range: {what}"),
            Error::Domain(what) => write!(f, "domain error: {what}"),
            Error::SizeCapExceeded { vertices, cap } => {
                write!(f, "graph has {vertices} vertices, exceeding the cap of {cap}")
            }
            Error::UnsupportedOrder { order, max } => {
                write!(f, "order {order} unsupported (maximum {max})")
            }
            Error::AccuracyNotReached {
                requested_rel_tol,
                note,
                ..
            } => write!(
                f,
                "requested relative tolerance {requested_rel_tol:e} not reached: {note}"
            ),
        }
    }
}

impl core::error::Error for Error {}
