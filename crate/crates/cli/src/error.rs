// SPDX-License-Identifier: Apache-2.0

use std::fmt;

use editpath_model::ModelError;

/// A failed command and the exit code it maps to.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments.
    Usage(anyhow::Error),
    /// Unreadable, malformed or empty input.
    Data(anyhow::Error),
    /// Divergence or an unexpected failure.
    Internal(anyhow::Error),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(anyhow::anyhow!("{msg}"))
    }

    pub fn data(msg: impl fmt::Display) -> Self {
        CliError::Data(anyhow::anyhow!("{msg}"))
    }

    pub fn context(self, what: impl fmt::Display) -> Self {
        let what = what.to_string();
        match self {
            CliError::Usage(e) => CliError::Usage(e.context(what)),
            CliError::Data(e) => CliError::Data(e.context(what)),
            CliError::Internal(e) => CliError::Internal(e.context(what)),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (CliError::Usage(e) | CliError::Data(e) | CliError::Internal(e)) = self;
        write!(f, "{e:#}")
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::Invalid(_) => CliError::Usage(e.into()),
            ModelError::Divergence { .. } => CliError::Internal(e.into()),
            _ => CliError::Data(e.into()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Attaches context and classifies the error as a data error.
pub trait DataContext<T> {
    fn data(self, what: impl fmt::Display) -> CliResult<T>;
}

impl<T, E> DataContext<T> for Result<T, E>
where
    E: Into<anyhow::Error>,
{
    fn data(self, what: impl fmt::Display) -> CliResult<T> {
        self.map_err(|e| CliError::Data(e.into().context(what.to_string())))
    }
}
