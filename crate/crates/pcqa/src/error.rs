use std::io;
use std::path::PathBuf;

use crate::ply::PlyError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] pcqa_core::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {source}", path.display())]
    Ply { path: PathBuf, source: PlyError },
    #[error("{}: {message}", path.display())]
    Format { path: PathBuf, message: String },
    #[error("{0}")]
    Input(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format { path: path.into(), message: message.into() }
    }

    /// 3 for broken internal invariants, 2 for everything caused by input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Core(e) if e.is_invariant_violation() => 3,
            _ => 2,
        }
    }
}
