use std::fmt;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Usage,
    Input,
    Domain,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Usage => "usage",
            Kind::Input => "input",
            Kind::Domain => "domain",
        })
    }
}

#[derive(Debug, Error)]
#[error("error[{kind}]: {message}")]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn new(kind: Kind, message: impl Into<String>) -> Self {
        // One line per error keeps the prefix parseable.
        let message = message.into().lines().map(str::trim).collect::<Vec<_>>().join(" ");
        CliError { kind, message }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(Kind::Usage, message)
    }

    pub fn input(message: impl Into<String>) -> Self {
        Self::new(Kind::Input, message)
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Self::new(Kind::Domain, message)
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            Kind::Domain => 1,
            Kind::Usage | Kind::Input => 2,
        }
    }
}

impl From<graphlet_core::Error> for CliError {
    fn from(e: graphlet_core::Error) -> Self {
        use graphlet_core::Error as E;
        let kind = match e {
            E::Parse { .. } | E::InvalidInput(_) | E::SizeBound(_) => Kind::Input,
            _ => Kind::Domain,
        };
        CliError::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::input(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
