//! Error-to-exit-code mapping: 0 success, 1 verification failure, 2 usage or
//! parse error, 3 resource ceiling.

use swilf::count::CountError;
use swilf::limits::LimitError;
use swilf::merge::MergeError;
use swilf::perm::{ParsePermutationError, PermutationError};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Ceiling(String),
    Failure(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Ceiling(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Ceiling(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<ParsePermutationError> for CliError {
    fn from(e: ParsePermutationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<PermutationError> for CliError {
    fn from(e: PermutationError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<CountError> for CliError {
    fn from(e: CountError) -> Self {
        match e {
            CountError::CeilingExceeded { .. } | CountError::TooLarge { .. } => {
                CliError::Ceiling(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<MergeError> for CliError {
    fn from(e: MergeError) -> Self {
        match e {
            MergeError::WitnessCeiling { .. } => CliError::Ceiling(e.to_string()),
            MergeError::Count(inner) => inner.into(),
            MergeError::Postcondition(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<LimitError> for CliError {
    fn from(e: LimitError) -> Self {
        match e {
            LimitError::Count(inner) => inner.into(),
            LimitError::EmptyRange => CliError::Usage(e.to_string()),
        }
    }
}
