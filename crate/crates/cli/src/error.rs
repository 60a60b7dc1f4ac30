use std::fmt;

use subdisc::{AnalysisError, DatasetError, FeatureError, ParamError};

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 1;
    pub const EMPTY: i32 = 2;
    pub const IO: i32 = 3;
    pub const CSV: i32 = 4;
    pub const SCHEMA: i32 = 5;
    pub const UNUSABLE: i32 = 6;
    pub const FEATURES: i32 = 7;
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ParamError> for CliError {
    fn from(e: ParamError) -> Self {
        CliError::new(exit::INVALID, e.to_string())
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        let code = match e {
            DatasetError::Csv { .. } => exit::CSV,
            DatasetError::Io(_) => exit::IO,
            DatasetError::Schema(_) | DatasetError::Empty | DatasetError::TooLarge { .. } => {
                exit::SCHEMA
            }
        };
        CliError::new(code, e.to_string())
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        let code = match e {
            FeatureError::TooMany { .. } => exit::FEATURES,
            _ => exit::INVALID,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::new(exit::INVALID, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::new(exit::IO, e.to_string())
    }
}
