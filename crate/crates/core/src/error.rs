use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeMismatch { expected: usize, found: usize },

    #[error("invalid mode space: {0}")]
    InvalidModes(String),

    #[error("Fock dimension {dim} exceeds the configured maximum {max}")]
    DimensionTooLarge { dim: u128, max: usize },

    #[error("dense dimension {dim} exceeds the densification cap {cap}")]
    DenseTooLarge { dim: usize, cap: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("inverse temperature must be positive and finite, got {0}")]
    InvalidBeta(f64),

    #[error("Gram matrix is ill-conditioned: condition number {condition:e} at |g| = {g_norm}")]
    IllConditioned { condition: f64, g_norm: f64 },

    #[error("quadrature did not converge: achieved {achieved:e}, requested {requested:e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_modes(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::ModeMismatch { expected, found })
    }
}
