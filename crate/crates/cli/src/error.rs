use lovelock_core::Error;
use serde::Serialize;

/// Exit statuses of the `lovelock` binary.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INVALID: i32 = 2;
    pub const GATE: i32 = 3;
    pub const CONSISTENCY: i32 = 4;
}

/// Machine-readable failure, emitted as the report of a failed run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> CliError {
        CliError { kind: "invalid_input", message: msg.into(), exit_code: exit::INVALID, detail: None }
    }

    pub fn gate(msg: impl Into<String>) -> CliError {
        CliError { kind: "gate", message: msg.into(), exit_code: exit::GATE, detail: None }
    }

    pub fn tolerance(msg: impl Into<String>) -> CliError {
        CliError { kind: "tolerance", message: msg.into(), exit_code: exit::CONSISTENCY, detail: None }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> CliError {
        self.detail = Some(detail);
        self
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let (kind, exit_code) = match &e {
            Error::Gate(_) | Error::DegenerateCoupling(_) => ("gate", exit::GATE),
            Error::Consistency(_) | Error::LogSquared | Error::NotDivisible => ("consistency", exit::CONSISTENCY),
            Error::Tolerance(_) => ("tolerance", exit::CONSISTENCY),
            Error::Unsupported(_) => ("unsupported", exit::INVALID),
            _ => ("invalid_input", exit::INVALID),
        };
        CliError { kind, message: e.to_string(), exit_code, detail: None }
    }
}
