use thiserror::Error;

/// Errors raised by the simulation and search routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    /// The conditioned branch has zero Born weight and cannot be renormalized.
    #[error("impossible outcome: the conditional probability is zero")]
    ImpossibleOutcome,

    #[error("amplitude at photon number {photons} leaves the Fock cutoff n_max = {n_max}")]
    Cutoff { photons: usize, n_max: usize },

    #[error("unsupported sequence: {0}")]
    UnsupportedSequence(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
