use std::fmt;

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 1;
pub const EXIT_RUNTIME: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

/// A failure with its process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn validation(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VALIDATION, message: message.into() }
    }

    pub fn runtime(message: impl Into<String>) -> Self {
        CliError { code: EXIT_RUNTIME, message: message.into() }
    }

    pub fn verification(message: impl Into<String>) -> Self {
        CliError { code: EXIT_VERIFICATION, message: message.into() }
    }

    /// Input problems are validation errors, everything else is a runtime
    /// error.
    pub fn from_core(context: &str, e: drsubmax::Error) -> Self {
        use drsubmax::Error as E;
        let message = format!("{context}: {e}");
        match e {
            E::InvalidParameter(_)
            | E::DimensionMismatch { .. }
            | E::OutsideDomain { .. }
            | E::Parse { .. }
            | E::Json(_)
            | E::Io(_) => CliError::validation(message),
            _ => CliError::runtime(message),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::runtime(e.to_string())
    }
}
