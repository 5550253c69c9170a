//! File formats and the command driver for `latcount`.

pub mod commands;
pub mod error;
pub mod input;
pub mod render;

pub use commands::{run, Command, RunConfig};
pub use error::{CliError, CliResult};
pub use input::{parse_polytope, PolytopeSpec};
