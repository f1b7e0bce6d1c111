use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{value} is outside the domain {domain}")]
    Domain { value: f64, domain: String },

    #[error("singular point at r = {r}: {reason}")]
    Singular { r: f64, reason: String },

    /// A user-supplied mass callable failed.
    #[error("mass profile evaluation failed at r = {r}: {message}")]
    Evaluation { r: f64, message: String },

    #[error("quadrature did not converge: best estimate {estimate} with error {error_estimate} (target {tolerance})")]
    NonConvergence {
        estimate: f64,
        error_estimate: f64,
        tolerance: f64,
    },

    /// Pole in a Pochhammer denominator.
    #[error("hypergeometric parameter error: {0}")]
    Parameter(String),

    #[error("internal error: {0}")]
    Internal(String),
}
