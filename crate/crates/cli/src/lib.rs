//! Quiver files, reports and the commands behind the `kacv` binary.

pub mod commands;
pub mod file;
pub mod report;

pub use commands::{cmd_hn, cmd_kac, cmd_mult, cmd_verify, Method, Options, Which};
pub use file::{parse_quiver_file, render_quiver_file, QuiverFile};
pub use report::{Check, Report};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] kacv_core::Error),
}
