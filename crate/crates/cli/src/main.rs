mod cli;
mod commands;
mod config;
mod error;
mod report;

use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches};

use crate::cli::Cli;
use crate::report::Sink;

/// Later occurrences of a flag replace earlier ones, so config defaults can
/// sit in front of the user's own flags.
fn override_all(cmd: clap::Command) -> clap::Command {
    let names: Vec<String> = cmd.get_subcommands().map(|s| s.get_name().to_string()).collect();
    let mut cmd = cmd.args_override_self(true);
    for name in names {
        cmd = cmd.mut_subcommand(name, override_all);
    }
    cmd
}

fn parse() -> Result<Cli, clap::Error> {
    let args = config::expand(std::env::args_os().collect())
        .map_err(|e| Cli::command().error(clap::error::ErrorKind::Io, e.to_string()))?;
    let matches = override_all(Cli::command()).try_get_matches_from(args)?;
    Cli::from_arg_matches(&matches)
}

fn main() -> ExitCode {
    let cli = match parse() {
        Ok(cli) => cli,
        // Help and version exit 0; anything else is a usage error (2).
        Err(e) => e.exit(),
    };
    let sink = Sink { json: cli.json, out: cli.out.clone() };
    match commands::run(&cli).and_then(|reports| {
        sink.emit(&reports)?;
        Ok(reports.iter().all(|r| r.pass))
    }) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
