use thiserror::Error;

/// Errors produced by the crase-core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CraseError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Region-1 gain at or above the cavity loss. The amplifier must stay
    /// below the lasing threshold (`gamma_a1 < gamma_b1`).
    #[error(
        "above lasing threshold: gamma_a1 = {gain} must stay below gamma_b1 = {loss} \
         (the region-1 cavity must be below the lasing threshold)"
    )]
    AboveThreshold { gain: f64, loss: f64 },

    /// Integration blew up; usually the time step is too coarse for the
    /// detuning grid.
    #[error("numerical instability: {0}")]
    Instability(String),
}

pub type Result<T> = std::result::Result<T, CraseError>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(CraseError::InvalidArgument(msg.into()))
}
