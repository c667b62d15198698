//! File formats, rendering and the command-line front end for `synclat`.

pub mod commands;
pub mod error;
pub mod formats;
pub mod render;

pub use commands::{run, Cli, Command, Outcome};
pub use error::CliError;
