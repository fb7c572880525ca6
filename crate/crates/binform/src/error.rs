//! Error type shared across the crate.
//!
//! Every fallible operation returns [`Error`]. The variants separate four
//! situations that callers usually want to treat differently:
//!
//! * malformed input (`Parse`, `InvalidSpec`),
//! * forms outside the domain of the invariant (`LeadingZero`,
//!   `ReducibleAtInfinity`, `Degenerate`, `NotStable`),
//! * numerical failure of an iteration (`NoConvergence`), which carries
//!   enough state to diagnose or retry with looser tolerances,
//! * I/O passed through from the command-line layer.

use std::fmt;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while parsing, reducing, or minimizing.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Input text could not be parsed as a form, matrix, or option value.
    Parse(String),
    /// A leading coefficient of zero where a nonzero one is required:
    /// the form vanishes at the point at infinity and the degree-n theory
    /// does not apply to it directly.
    LeadingZero,
    /// The form (or its dehomogenization) has a repeated root, so the
    /// invariant-theoretic quantities that assume distinct roots are
    /// undefined.
    Degenerate {
        /// Smallest observed distance between two roots, relative to the
        /// root radius.
        separation: f64,
    },
    /// The root multiset puts mass n/2 or more at a real point (or at
    /// infinity), so the hyperbolic objective has no interior minimum.
    /// Definite-signature quadratics are the smallest forms that avoid this.
    NotStable {
        /// Human-readable description of the offending root cluster.
        detail: String,
    },
    /// A form that vanishes at (1 : 0), i.e. has x-degree < n; such forms
    /// are reducible (y divides them) and are excluded from class counts.
    ReducibleAtInfinity,
    /// An iterative minimization did not reach the gradient tolerance.
    NoConvergence {
        /// Iterations actually performed.
        iterations: u32,
        /// Gradient norm at the last iterate.
        gradient_norm: f64,
        /// Last iterate, as (t, u) coordinates on the upper half plane.
        last_point: (f64, f64),
    },
    /// A congruence or enumeration specification is inconsistent, e.g. a
    /// residue set that is not closed under the unimodular action.
    InvalidSpec(String),
    /// I/O failure, carried as text so the error type stays `Clone`.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::LeadingZero => write!(f, "leading coefficient is zero"),
            Error::Degenerate { separation } => {
                write!(f, "degenerate form: repeated root (separation {separation:.3e})")
            }
            Error::NotStable { detail } => {
                write!(f, "form is not stable: {detail}")
            }
            Error::ReducibleAtInfinity => {
                write!(f, "form vanishes at infinity (divisible by y), hence reducible")
            }
            Error::NoConvergence {
                iterations,
                gradient_norm,
                last_point,
            } => write!(
                f,
                "minimization stalled after {iterations} iterations \
                 (gradient norm {gradient_norm:.3e} at t={:.6}, u={:.6})",
                last_point.0, last_point.1
            ),
            Error::InvalidSpec(msg) => write!(f, "invalid specification: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
