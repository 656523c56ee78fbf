//! Error type shared by the simulator core.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors surfaced by construction, parsing, and configuration paths.
///
/// Hot-loop operations (forwarding, updates) do not allocate errors; they
/// uphold their invariants by construction and only the fallible entry
/// points return `Error`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument violates an operation's preconditions.
    InvalidParameter(String),
    /// An operation was invoked in a state it does not accept.
    InvalidCall(String),
    /// A topology violates a structural invariant.
    InvalidTopology(String),
    /// A textual input failed to parse. `line` is 1-based; 0 means the
    /// problem concerns the input as a whole.
    Parse { line: usize, message: String },
    /// An invalid simulation or experiment configuration.
    Config(String),
    /// A computation was refused because its size guard tripped.
    TooLarge(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::InvalidCall(msg) => write!(f, "invalid call: {msg}"),
            Error::InvalidTopology(msg) => write!(f, "invalid topology: {msg}"),
            Error::Parse { line: 0, message } => write!(f, "parse error: {message}"),
            Error::Parse { line, message } => write!(f, "parse error at line {line}: {message}"),
            Error::Config(msg) => write!(f, "config error: {msg}"),
            Error::TooLarge(msg) => write!(f, "instance too large: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
