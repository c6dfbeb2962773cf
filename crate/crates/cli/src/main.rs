//! `optham`: optimal Hamiltonians, minimal-entropy curves, Gibbs solves,
//! semicontinuity bounds and oracle verification from the command line.

use std::process::ExitCode;

use clap::Parser;

mod args;
mod commands;
mod error;
mod formats;

fn main() -> ExitCode {
    let cli = args::Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
