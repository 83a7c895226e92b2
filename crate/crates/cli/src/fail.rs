//! Command failures and their one-line diagnostics.

use std::fmt;
use std::path::{Path, PathBuf};

use phonlat_core::automata::{FstError, SymbolError};
use phonlat_core::ctc::CtcError;
use phonlat_core::decode::DecodeError;
use phonlat_core::graphs::GraphError;
use phonlat_core::lm::LmError;
use phonlat_core::metrics::MetricsError;
use phonlat_core::simulate::SimulationError;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;

#[derive(Debug)]
pub enum Failure {
    /// Flags that parse but make no sense together.
    Usage(String),
    /// Unreadable or invalid input, located as precisely as possible.
    Data { path: PathBuf, line: Option<usize>, msg: String },
}

impl Failure {
    pub fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }

    pub fn data(path: &Path, line: Option<usize>, msg: impl Into<String>) -> Self {
        Failure::Data { path: path.to_path_buf(), line, msg: msg.into() }
    }

    /// Wraps a library error raised while handling `path`.
    pub fn at<E: Locate>(path: &Path) -> impl FnOnce(E) -> Failure + '_ {
        move |e| {
            let (line, msg) = e.locate();
            Failure::data(path, line, msg)
        }
    }

    pub fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Failure + '_ {
        move |e| Failure::data(path, None, e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data { .. } => EXIT_DATA,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "usage: {msg}"),
            Failure::Data { path, line: Some(line), msg } => write!(f, "{}:{line}: {msg}", path.display()),
            Failure::Data { path, line: None, msg } => write!(f, "{}: {msg}", path.display()),
        }
    }
}

/// Splits an error into its source line, when it has one, and a message.
pub trait Locate {
    fn locate(&self) -> (Option<usize>, String);
}

fn parsed(line: usize, msg: &str) -> (Option<usize>, String) {
    ((line > 0).then_some(line), msg.to_string())
}

impl Locate for CtcError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            CtcError::Parse { line, msg } => parsed(*line, msg),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for FstError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            FstError::Parse { line, msg } => parsed(*line, msg),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for SymbolError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            SymbolError::Parse { line, msg } => parsed(*line, msg),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for LmError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            LmError::Parse { line, msg } => parsed(*line, msg),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for GraphError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            GraphError::Parse { line, msg } => parsed(*line, msg),
            GraphError::Ctc(e) => e.locate(),
            GraphError::Fst(e) => e.locate(),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for DecodeError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            DecodeError::Ctc(e) => e.locate(),
            DecodeError::Lm(e) => e.locate(),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for SimulationError {
    fn locate(&self) -> (Option<usize>, String) {
        match self {
            SimulationError::Ctc(e) => e.locate(),
            e => (None, e.to_string()),
        }
    }
}

impl Locate for MetricsError {
    fn locate(&self) -> (Option<usize>, String) {
        (None, self.to_string())
    }
}
