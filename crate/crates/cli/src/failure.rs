//! CLI failure type: a message plus a stable exit code per error class.

use modcurve::Error;

/// Exit codes, one per error class.
pub mod code {
    /// Bad usage or invalid input data.
    pub const USAGE: i32 = 2;
    /// A required membership does not hold.
    pub const NOT_MEMBER: i32 = 3;
    /// An enumeration cap or search budget was exhausted.
    pub const EXHAUSTED: i32 = 4;
    /// Series-level obstruction (odd valuation, missing root, field clash).
    pub const SERIES: i32 = 5;
    /// Internal inconsistency: a library bug surfaced.
    pub const INTERNAL: i32 = 6;
    /// Filesystem or serialization trouble.
    pub const IO: i32 = 7;
}

/// An error carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    /// Process exit code.
    pub code: i32,
    /// Message for stderr.
    pub message: String,
}

impl Failure {
    /// Usage-class failure.
    pub fn usage(message: String) -> Failure {
        Failure {
            code: code::USAGE,
            message,
        }
    }

    /// I/O-class failure.
    pub fn io(message: String) -> Failure {
        Failure {
            code: code::IO,
            message,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match &e {
            Error::InvalidSpec { .. }
            | Error::NotUnimodular { .. }
            | Error::InvalidInput { .. } => code::USAGE,
            Error::NotMember { .. } => code::NOT_MEMBER,
            Error::CapExceeded { .. } | Error::BudgetExhausted { .. } => code::EXHAUSTED,
            Error::Series { .. } | Error::SqrtNeedsExtension | Error::FieldMismatch { .. } => {
                code::SERIES
            }
            Error::Inconsistency { .. } => code::INTERNAL,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::usage(format!("JSON: {e}"))
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}
