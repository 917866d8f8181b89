use thiserror::Error;

use crate::quat::Quaternion;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Argument outside the domain of a scalar operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular operator (smallest singular value {smallest_singular:e})")]
    SingularOperator { smallest_singular: f64 },

    #[error("{q} is not in the S-resolvent set (smallest singular value of Δ_q(A) is {smallest_singular:e})")]
    NotInResolventSet { q: Quaternion, smallest_singular: f64 },

    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),

    #[error("{q} lies outside the convergence domain: u(q, q0) = {distance} ≥ R = {radius}")]
    OutsideConvergenceDomain { q: Quaternion, distance: f64, radius: f64 },

    #[error("{0} is not in the S-spectrum")]
    NotInSpectrum(Quaternion),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
