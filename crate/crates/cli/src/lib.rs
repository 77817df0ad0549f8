//! Command implementations behind the `ntwfsm` binary.
//!
//! Every command writes to a caller-supplied sink and reports failures as
//! [`CliError`], whose [`CliError::exit_code`] is what the binary exits with.

pub mod bench;
pub mod commands;
pub mod oracle_check;

use std::io;
use std::path::Path;

use thiserror::Error;

use ntwfsm::{AlignError, AnyMachine, ModelError, ParseError, SearchError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Search(#[from] SearchError),
    /// A check ran to completion and found a problem.
    #[error("{0}")]
    Failed(String),
    #[error("writing output: {0}")]
    Output(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io { .. } => 2,
            CliError::Parse { .. } | CliError::Model(_) => 3,
            CliError::Search(e) => match e {
                SearchError::NoAcceptingPath => 1,
                SearchError::InputArity { .. } => 2,
                SearchError::Model(_) | SearchError::EpsilonCycle { .. } => 3,
            },
            CliError::Failed(_) | CliError::Output(_) => 1,
        }
    }
}

impl From<AlignError> for CliError {
    fn from(e: AlignError) -> Self {
        match e {
            AlignError::Search(s) => CliError::Search(s),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.into())
    }
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_machine(path: &Path) -> Result<AnyMachine, CliError> {
    let text = read_file(path)?;
    AnyMachine::parse(&text).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

/// Parses a comma-separated list of 1-based tape numbers into 0-based
/// indices.
pub fn parse_tape_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|item| match item.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(n - 1),
            _ => Err(CliError::Usage(format!(
                "invalid tape number `{}` (tapes are numbered from 1)",
                item.trim()
            ))),
        })
        .collect()
}
