//! Command-line front end: `validate`, `cluster`, `grid` and `report`.

pub mod args;
pub mod commands;
pub mod config;
mod error;
mod output;

use args::{Cli, Command};
use commands::Outcome;
use config::{Flags, Settings};

pub use error::CliError;

/// Resolves settings for the parsed command line and runs it.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    let mut flags = Flags {
        config: cli.config,
        out_dir: cli.out_dir,
        formats: cli.format,
        ..Flags::default()
    };
    let command = match cli.command {
        Command::Validate(input) => {
            flags.input = input;
            Kind::Validate
        }
        Command::Cluster {
            input,
            slice,
            analysis,
        } => {
            flags.input = input;
            flags.slice = slice;
            flags.analysis = analysis;
            Kind::Cluster
        }
        Command::Grid { input, slice, grid } => {
            flags.input = input;
            flags.slice = slice;
            flags.grid = grid;
            Kind::Grid
        }
        Command::Report {
            input,
            slice,
            analysis,
            grid,
        } => {
            flags.input = input;
            flags.slice = slice;
            flags.analysis = analysis;
            flags.grid = grid;
            Kind::Report
        }
    };
    let settings = Settings::resolve(flags)?;
    match command {
        Kind::Validate => commands::validate(&settings.input),
        Kind::Cluster => commands::cluster(&settings),
        Kind::Grid => commands::grid(&settings),
        Kind::Report => commands::report(&settings),
    }
}

enum Kind {
    Validate,
    Cluster,
    Grid,
    Report,
}
