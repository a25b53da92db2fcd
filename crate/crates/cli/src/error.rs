use thiserror::Error;

use crase_core::CraseError;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const CLAIM_VIOLATION: u8 = 3;
    pub const TOLERANCE: u8 = 4;
    pub const INSTABILITY: u8 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error{}{}: {message}", fmt_line(*.line), fmt_key(.key))]
    Config {
        line: Option<usize>,
        key: Option<String>,
        message: String,
    },

    /// A sweep cell where the entanglement claim should hold but does not.
    #[error("claim violated: {0}")]
    ClaimViolation(String),

    #[error("outside tolerance: {0}")]
    Tolerance(String),

    #[error("numerical instability: {0}")]
    Instability(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

fn fmt_line(line: Option<usize>) -> String {
    line.map_or(String::new(), |l| format!(" at line {l}"))
}

fn fmt_key(key: &Option<String>) -> String {
    key.as_ref().map_or(String::new(), |k| format!(" ({k})"))
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config { .. } => exit::CONFIG,
            Self::ClaimViolation(_) => exit::CLAIM_VIOLATION,
            Self::Tolerance(_) => exit::TOLERANCE,
            Self::Instability(_) => exit::INSTABILITY,
            // Unwritable outputs are a configuration problem from the user's
            // side: the paths come from the config or the command line.
            Self::Io(_) | Self::Csv(_) => exit::CONFIG,
        }
    }

    /// Library errors outside config parsing. Invalid arguments at this
    /// stage still come from user input.
    pub fn from_core(e: CraseError) -> Self {
        match e {
            CraseError::Instability(m) => Self::Instability(m),
            other => Self::Config {
                line: None,
                key: None,
                message: other.to_string(),
            },
        }
    }
}

impl From<CraseError> for CliError {
    fn from(e: CraseError) -> Self {
        Self::from_core(e)
    }
}
