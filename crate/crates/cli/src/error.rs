use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INPUT: u8 = 2;
    pub const MATH: u8 = 3;
    pub const BUDGET: u8 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error(transparent)]
    Core(#[from] symanzik_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use symanzik_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::Json { .. } => exit::INPUT,
            CliError::Core(e) => match e {
                E::BudgetExceeded { .. } => exit::BUDGET,
                E::NotConnected
                | E::NoTwoForest(_)
                | E::InvalidEndpoint { .. }
                | E::TooManyEdges(_)
                | E::InvalidMomenta(_)
                | E::MomentumNotConserved(_)
                | E::InvalidSpec(_)
                | E::InvalidWeights { .. }
                | E::NotSquare(..) => exit::INPUT,
                _ => exit::MATH,
            },
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
