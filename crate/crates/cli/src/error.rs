use std::fmt;

use relk_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_RESOLUTION: i32 = 2;
pub const EXIT_NOT_COMPUTABLE: i32 = 3;
pub const EXIT_INVALID_LIFT: i32 = 4;

/// A failure together with the exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn resolution(message: impl Into<String>) -> Self {
        CliError { code: EXIT_RESOLUTION, message: message.into() }
    }

    pub fn not_computable(message: impl Into<String>) -> Self {
        CliError { code: EXIT_NOT_COMPUTABLE, message: format!("not computable in this regime: {}", message.into()) }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::NotComputable(m) => CliError::not_computable(m),
            Error::NotFiniteDimensional => CliError::not_computable("source algebra is not finite-dimensional"),
            Error::LiftInvalid(_) | Error::CertificateInvalid(_) | Error::StepTooCoarse(_) => {
                CliError { code: EXIT_INVALID_LIFT, message: e.to_string() }
            }
            other => CliError { code: EXIT_VERIFICATION, message: other.to_string() },
        }
    }
}
