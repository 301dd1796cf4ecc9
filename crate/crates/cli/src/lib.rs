//! Command-line front end: subcommands, experiment manifests and SVG plots.

pub mod commands;
pub mod manifest;
pub mod svg;

pub use commands::{run_cli, CliError};
pub use manifest::Manifest;
pub use svg::render_svg;
