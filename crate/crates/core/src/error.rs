use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the domain of a special function or profile.
    Domain(String),
    /// Pointwise evaluation of an expression that still carries a `δ^(k)(u)` layer.
    DeltaLayerPresent,
    /// Pointwise evaluation of a negative cone power exactly on the cone `u = 0`.
    OnConeSingularity,
    /// The expression depends on `t` but no time coordinate was supplied.
    MissingTime,
    /// A kernel specification or run configuration violates its invariants.
    InvalidSpec(String),
    /// A time test function whose support reaches `t <= 0`.
    SupportTouchesZero,
    /// Adaptive quadrature stopped before reaching the requested tolerance.
    Quadrature { estimate: f64, requested: f64 },
    /// The request is well formed but outside what this build supports.
    Unsupported(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::DeltaLayerPresent => write!(
                f,
                "DeltaLayerPresent: expression contains a cone delta layer; pair it with a time test function"
            ),
            Error::OnConeSingularity => write!(f, "OnConeSingularity: negative cone power evaluated on the cone"),
            Error::MissingTime => write!(f, "MissingTime: expression depends on t but no time was given"),
            Error::InvalidSpec(msg) => write!(f, "invalid specification: {msg}"),
            Error::SupportTouchesZero => write!(f, "time test function support must lie in t > 0"),
            Error::Quadrature { estimate, requested } => write!(
                f,
                "quadrature did not converge: error estimate {estimate:e} > requested {requested:e}"
            ),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidSpec(msg.into())
}
