//! Command-line front end: locate indices, generate sequences, verify them
//! against OEIS fixtures and time the locators.

use std::fmt;

use irrarray_core::Error;

pub mod app;
pub mod bench;
pub mod generate;
pub mod syntax;
pub mod verify;

pub use app::run;

/// Exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    /// Mismatch, violation or failed computation.
    pub const FAILURE: i32 = 1;
    /// Missing fixture, unreadable file, network trouble.
    pub const ENVIRONMENT: i32 = 2;
    pub const USAGE: i32 = 64;
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Environment(String),
    Failure(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => exit::USAGE,
            CliError::Environment(_) => exit::ENVIRONMENT,
            CliError::Failure(_) => exit::FAILURE,
            CliError::Core(e) => match e {
                Error::Domain(_) => exit::USAGE,
                Error::Io { .. } | Error::Network(_) | Error::HttpStatus(_) => exit::ENVIRONMENT,
                _ => exit::FAILURE,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Environment(m) | CliError::Failure(m) => f.write_str(m),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Environment(e.to_string())
    }
}
