use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] hamming_qubit::Error),

    #[error("{0}")]
    Usage(String),

    #[error("{path}: illegal byte {byte:#04x} at offset {offset}")]
    Parse {
        path: PathBuf,
        offset: u64,
        byte: u8,
    },

    #[error("{0}: no bits in input")]
    EmptyInput(PathBuf),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub fn io(context: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    /// 1 for domain and parse errors, 2 for I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
