use thiserror::Error;

/// Errors raised by the passivity solvers.
///
/// Scalar payloads are stored as `f64` regardless of the working precision.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("wrong time domain: {0}")]
    WrongDomain(&'static str),

    #[error("non-finite entries in {0}")]
    NonFinite(&'static str),

    #[error("evaluation point hits a pole (shift = {re} + {im}i)")]
    Pole { re: f64, im: f64 },

    #[error("eigenvalue computation failed: {0}")]
    Eigen(&'static str),

    #[error("singular block {0}; use the full pencil form instead")]
    SingularBlock(&'static str),

    #[error("initial data violates the root-min sign convention: {0}")]
    InitialSigns(String),

    #[error("no sign change in bracket [{lo}, {hi}] (g = {g_lo}, {g_hi})")]
    Bracket { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    #[error("no convergence after {iterations} iterations (last eps = {eps}, x = {x})")]
    NonConvergence { iterations: usize, eps: f64, x: f64 },

    #[error("midpoint iteration stagnated at xi = {xi} (omega = {omega}): {reason}")]
    Stagnation { xi: f64, omega: f64, reason: String },

    #[error("I/O error: {0}")]
    Io(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
