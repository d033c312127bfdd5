use std::fmt;
use std::path::Path;

use cmsweep::cmx::{parse_cmx, CmxError};
use cmsweep::{ConnectionMatrix, SweepError};

/// Everything that ends a command with a nonzero exit status.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1: a bad input or an unmet precondition.
    Precondition(String),
    /// Exit 2.
    Io(String),
    /// Exit 3: an invariant failed, or compared artifacts differ.
    Verification(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Precondition(_) => 1,
            Failure::Io(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Failure::Io(format!("{}: {err}", path.display()))
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Precondition(msg) => write!(f, "precondition violated: {msg}"),
            Failure::Io(msg) => write!(f, "i/o error: {msg}"),
            Failure::Verification(msg) => write!(f, "verification failed: {msg}"),
        }
    }
}

impl From<SweepError> for Failure {
    fn from(err: SweepError) -> Self {
        Failure::Precondition(err.to_string())
    }
}

pub fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

pub fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::io(path, e))
}

pub fn load_cmx(path: &Path) -> Result<ConnectionMatrix, Failure> {
    let text = read(path)?;
    parse_cmx(&text).map_err(|e: CmxError| Failure::Precondition(format!("{}: {e}", path.display())))
}
