//! Machine-readable run reports: one JSON envelope per command.

use std::time::Instant;

use serde_json::{json, Value};

/// Envelope for every command's output. Identical inputs produce identical
/// payloads except for `wall_time_ms`.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub version: String,
    pub wall_time_ms: u128,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value, outputs: Value, started: Instant) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            outputs,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_time_ms: started.elapsed().as_millis(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": self.version,
            "wall_time_ms": self.wall_time_ms,
        })
    }

    /// The payload with the timing field removed (the determinism surface).
    pub fn deterministic_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "version": self.version,
        })
    }
}

/// Exit codes: 0 success, 1 selftest failure, 2 input/config error,
/// 3 resource cap exceeded, 4 truncation exhausted.
pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

#[derive(Debug, Clone)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

impl From<mol_core::orbit::OrbitError> for CliError {
    fn from(e: mol_core::orbit::OrbitError) -> Self {
        use mol_core::lie::{HallError, LieError};
        use mol_core::orbit::OrbitError;
        let exit_code = match &e {
            OrbitError::Lie(LieError::Hall(HallError::BasisTooLarge { .. })) => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        };
        CliError {
            exit_code,
            message: e.to_string(),
        }
    }
}

impl From<mol_core::lie::LieError> for CliError {
    fn from(e: mol_core::lie::LieError) -> Self {
        use mol_core::lie::{HallError, LieError};
        let exit_code = match &e {
            LieError::Hall(HallError::BasisTooLarge { .. }) => EXIT_RESOURCE,
            _ => EXIT_INPUT,
        };
        CliError {
            exit_code,
            message: e.to_string(),
        }
    }
}

impl From<mol_core::germs::GermError> for CliError {
    fn from(e: mol_core::germs::GermError) -> Self {
        use mol_core::germs::GermError;
        let exit_code = match &e {
            GermError::TruncationExhausted { .. } | GermError::TruncationTooSmall { .. } => {
                EXIT_TRUNCATION
            }
            _ => EXIT_INPUT,
        };
        CliError {
            exit_code,
            message: e.to_string(),
        }
    }
}

impl From<mol_core::gv::GvError> for CliError {
    fn from(e: mol_core::gv::GvError) -> Self {
        CliError {
            exit_code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

impl From<mol_core::freegroup::FreeGroupError> for CliError {
    fn from(e: mol_core::freegroup::FreeGroupError) -> Self {
        CliError {
            exit_code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

pub fn input_error(message: impl ToString) -> CliError {
    CliError {
        exit_code: EXIT_INPUT,
        message: message.to_string(),
    }
}
