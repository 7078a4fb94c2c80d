use std::fmt;

use cube_shadows::ShadowError;

/// Failure with a stable process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unparsable input or flags (exit 2).
    Parse(String),
    /// Degenerate input such as the zero vector (exit 3).
    Degenerate(String),
    /// Dimension above the enumeration limit (exit 4).
    Limit(String),
    /// File system failure (exit 5).
    Io(String),
    /// Anything else (exit 1).
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::Limit(_) => 4,
            CliError::Io(_) => 5,
            CliError::Other(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m)
            | CliError::Degenerate(m)
            | CliError::Limit(m)
            | CliError::Io(m)
            | CliError::Other(m) => f.write_str(m),
        }
    }
}

impl From<ShadowError> for CliError {
    fn from(e: ShadowError) -> Self {
        let msg = e.to_string();
        match e {
            ShadowError::ZeroVector | ShadowError::DegenerateSample { .. } => {
                CliError::Degenerate(msg)
            }
            ShadowError::DimensionTooLarge { .. } => CliError::Limit(msg),
            ShadowError::InvalidDimension(_)
            | ShadowError::NonFinite { .. }
            | ShadowError::InvalidSign { .. }
            | ShadowError::DimensionMismatch { .. } => CliError::Parse(msg),
            ShadowError::NonConvergence { .. } => CliError::Other(msg),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
