use thiserror::Error;

/// Errors raised by kernel evaluation, stress assembly and the numerical
/// back ends (quadrature, extrapolation).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The kernel is singular at the requested point (exact coincidence,
    /// or the axis without a cutoff).
    #[error("singular point: {0}")]
    Singular(String),

    /// An adaptive quadrature did not reach its tolerance.
    #[error("quadrature did not converge for {what}: estimate {estimate:e}, error {error:e}, tolerance {tolerance:e}")]
    Quadrature {
        what: String,
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    /// Successive Richardson extrapolants failed to contract.
    #[error("t -> 0 extrapolation did not converge: last correction {last:e}, previous {previous:e}")]
    Extrapolation { last: f64, previous: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
