use std::fmt;

use knotfloer::diagram::DiagramError;
use knotfloer::fibered::FiberedError;
use knotfloer::floer::FloerError;
use knotfloer::invariants::InvariantError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed or out-of-range input; exit code 2.
    Input(String),
    /// Stabilization or another engine step failed; exit code 3.
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Engine(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "invalid input: {m}"),
            CliError::Engine(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl From<DiagramError> for CliError {
    fn from(e: DiagramError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<FloerError> for CliError {
    fn from(e: FloerError) -> Self {
        CliError::Engine(e.to_string())
    }
}

impl From<InvariantError> for CliError {
    fn from(e: InvariantError) -> Self {
        match e {
            InvariantError::TruncationTooSmall { .. } => CliError::Input(e.to_string()),
            _ => CliError::Engine(e.to_string()),
        }
    }
}

impl From<FiberedError> for CliError {
    fn from(e: FiberedError) -> Self {
        CliError::Input(e.to_string())
    }
}
