//! Command-line frontend for branchkit: expression parsing, subcommand
//! dispatch, text and JSON output.

pub mod commands;
pub mod parse;

pub use commands::{execute, render, render_text, Cli, CommandResult};
