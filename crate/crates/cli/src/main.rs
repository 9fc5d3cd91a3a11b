mod args;
mod commands;
mod manifest;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::commands::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => commands::synth(&a),
        Command::Extract(a) => commands::extract(&a),
        Command::Diff(a) => commands::diff(&a),
        Command::Profile(a) => commands::profile(&a),
        Command::Contour(a) => commands::contour(&a),
        Command::Bench(a) => commands::bench(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hgbos: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(e) if e.is_validation() => 2,
            CliError::Lib(_) | CliError::Io(_) | CliError::Runtime(_) => 1,
        }
    }
}
