use thiserror::Error;

/// Errors raised by the library. Validation problems (bad shapes, bad
/// arguments) are kept apart from numerical failures so front ends can map
/// them to different exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("non-finite entry in {0}")]
    NonFinite(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("singular matrix: {0}")]
    Singular(String),
    #[error("null state: {0}")]
    NullState(String),
    #[error("defective transfer matrix: {0}")]
    Defective(String),
    #[error("thermodynamic limit undefined: {0}")]
    NoThermodynamicLimit(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("symmetry action not closed on basis: {0}")]
    NotClosed(String),
}

impl Error {
    /// True for errors caused by malformed input rather than by the numbers.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_) | Error::NonFinite(_) | Error::InvalidArgument(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
