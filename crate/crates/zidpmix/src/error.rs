//! Error type shared across the crate.

/// Errors surfaced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Data does not conform to its covariate schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// Invalid configuration (prior, sampler, standardization, experiment).
    #[error("configuration error: {0}")]
    Config(String),

    /// An operation that requires posterior draws was given an empty trace.
    #[error("empty posterior trace")]
    EmptyTrace,

    /// Experiment checkpoint could not be used for resuming.
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
}
