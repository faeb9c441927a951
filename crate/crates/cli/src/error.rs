use std::fmt::Display;

use termdrift_core::corpus::FetchError;

pub const USAGE: u8 = 1;
pub const DATA: u8 = 2;
pub const SERVICE: u8 = 3;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub error: anyhow::Error,
}

impl CliError {
    pub fn usage(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: USAGE,
            error: e.into(),
        }
    }

    pub fn data(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: DATA,
            error: e.into(),
        }
    }

    pub fn service(e: impl Into<anyhow::Error>) -> Self {
        Self {
            code: SERVICE,
            error: e.into(),
        }
    }

    pub fn fetch(e: FetchError) -> Self {
        match e {
            FetchError::NotFound { .. } => Self::data(e),
            _ => Self::service(e),
        }
    }
}

pub trait ResultExt<T> {
    fn data_err(self, context: impl Display) -> Result<T, CliError>;
}

impl<T, E: Into<anyhow::Error>> ResultExt<T> for Result<T, E> {
    fn data_err(self, context: impl Display) -> Result<T, CliError> {
        self.map_err(|e| CliError::data(e.into().context(context.to_string())))
    }
}
