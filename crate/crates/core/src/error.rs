use thiserror::Error;

/// Errors raised by the well map, the engine and the objectives.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QddsError {
    /// An argument lies outside the region where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The inverse map was asked for a δ that no guarded position produces.
    #[error("unsolvable input: δ = {delta} is outside [{lo}, {hi}] for k = {k}")]
    Unsolvable {
        delta: f64,
        k: f64,
        lo: f64,
        hi: f64,
    },

    /// A caller broke a documented precondition.
    #[error("contract violation: {0}")]
    Contract(String),

    /// Invalid swarm, objective or filter configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, QddsError>;
