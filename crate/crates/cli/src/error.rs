use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    /// Writing results failed.
    pub const OUTPUT: i32 = 1;
    /// Invalid flags or a configuration that cannot apply to the input.
    pub const CONFIG: i32 = 2;
    /// Missing, unreadable or malformed input data.
    pub const DATA: i32 = 3;
    /// The numerics could not produce a result (for example every scale
    /// flagged).
    pub const NUMERIC: i32 = 4;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("input file not found: {}", .0.display())]
    FileNotFound(PathBuf),
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error at row {row}, column {column}: {message}")]
    Parse {
        /// 1-based line in the input file.
        row: u64,
        column: String,
        message: String,
    },
    #[error("input data: {0}")]
    Data(mfdfa::Error),
    #[error("numerical failure: {0}")]
    Numeric(mfdfa::Error),
    #[error("unknown view `{0}` (expected fluctuation, hurst, tau or spectrum)")]
    UnknownView(String),
    #[error("malformed report: {0}")]
    Report(String),
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::UnknownView(_) => exit::CONFIG,
            CliError::FileNotFound(_)
            | CliError::Read { .. }
            | CliError::Parse { .. }
            | CliError::Data(_)
            | CliError::Report(_) => exit::DATA,
            CliError::Numeric(_) => exit::NUMERIC,
            CliError::Write { .. } => exit::OUTPUT,
        }
    }
}

impl From<mfdfa::Error> for CliError {
    fn from(err: mfdfa::Error) -> Self {
        use mfdfa::Error as E;
        match err {
            E::TooShort { .. } | E::NonFinite { .. } | E::NonPositivePrice { .. } | E::ZeroVariance => {
                CliError::Data(err)
            }
            E::ScaleTooLarge { .. }
            | E::ScaleTooSmall { .. }
            | E::BadOverlap { .. }
            | E::BadOrder { .. }
            | E::InvalidGrid(_)
            | E::BadSpec(_)
            | E::BadP { .. }
            | E::InvalidConfig(_) => CliError::Config(err.to_string()),
            E::WindowTooShort { .. }
            | E::WindowOutOfBounds { .. }
            | E::EmptyWindows
            | E::ZeroVarianceWithNegativeQ { .. }
            | E::TooFewScales { .. }
            | E::FlaggedColumnInRange { .. }
            | E::GridTooSmall { .. } => CliError::Numeric(err),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
