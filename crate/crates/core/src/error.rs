use thiserror::Error;

use crate::solver::EvolutionResult;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of a formula (negative density, σ ≥ 1, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A structural precondition on an argument is violated (non-periodic field,
    /// nonzero line mean, mismatched sizes, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("soliton does not exist: {0}")]
    NonexistentSoliton(String),

    #[error("dispersionless medium (beta = 0): {0}")]
    Dispersionless(String),

    #[error("quark degeneracy gamma_Q = {0} is not supported here; the closed forms require gamma_Q = 6")]
    UnsupportedDegeneracy(u32),

    #[error("energy density is not monotonic in the density near rho = {rho} fm^-3")]
    NonMonotonic { rho: f64 },

    #[error("insufficient history: {0}")]
    InsufficientHistory(String),

    #[error("integration diverged at t = {time} fm: {reason}")]
    Diverged {
        time: f64,
        reason: String,
        /// Everything recorded up to the last finite state.
        partial: Box<EvolutionResult>,
    },

    /// A numerical check ran to completion but its acceptance test failed.
    #[error("verification failed: {0}")]
    Unverified(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for usage/configuration problems, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Config(_) => 2,
            _ => 1,
        }
    }
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
