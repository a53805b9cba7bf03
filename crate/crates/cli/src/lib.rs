//! Driver for the level-15 pipeline: bundled data, per-stage reports and
//! certificates.

pub mod commands;
pub mod data;
pub mod report;

pub use data::{DataFile, DataStore, TableRow, DATA_DIR_ENV};
pub use report::{Entry, PipelineCertificate, Provenance, Session, Stage};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {file} from {path}: {reason}")]
    Data {
        file: String,
        path: String,
        reason: String,
    },
    #[error("cannot parse {file}: {msg}")]
    Parse { file: String, msg: String },
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn parse(file: DataFile, e: impl std::fmt::Display) -> Self {
        CliError::Parse {
            file: file.file_name().to_string(),
            msg: e.to_string(),
        }
    }

    /// Name of the stage reported for this error.
    pub fn stage(&self) -> &'static str {
        match self {
            CliError::Data { .. } | CliError::Parse { .. } => "data",
            CliError::Input(_) => "input",
        }
    }
}

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// A check ran and failed.
    pub const CHECK_FAILED: i32 = 1;
    /// Bad arguments or unreadable data.
    pub const INPUT: i32 = 2;
}
