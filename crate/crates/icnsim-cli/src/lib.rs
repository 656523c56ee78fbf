//! IO companion to `icnsim-core`: config files, topology and trace formats,
//! experiment outputs, the synthetic trace generator, and the `icnsim`
//! command line.

pub mod cli;
pub mod config;
pub mod formats;
pub mod output;
pub mod tracegen;

pub use cli::cli_main;

/// A command failure with its exit code: 2 for configuration and input
/// problems, 3 for output IO.
#[derive(Debug, thiserror::Error)]
pub enum CliFailure {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliFailure {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliFailure::Config(_) => 2,
            CliFailure::Io(_) => 3,
        }
    }
}
