//! `growtight`: growth counting, hyperbolicity checks, orbit validators and
//! growth-tightness reports.
//!
//! Exit codes: 0 success, 1 a check failed or a computation could not
//! finish, 2 invalid usage or input, 3 I/O failure.

mod args;
mod commands;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use output::CliError;

fn run(cli: &Cli) -> Result<bool, CliError> {
    let (outcome, out) = match &cli.command {
        Command::Growth(a) => (commands::growth(a)?, &a.out),
        Command::Delta(a) => (commands::delta(a)?, &a.out),
        Command::Tripod(a) => (commands::tripod(a)?, &a.out),
        Command::Net(a) => (commands::net(a)?, &a.out),
        Command::Orbit(a) => (commands::orbit(a)?, &a.out),
        Command::Embed(a) => (commands::embed(a)?, &a.out),
        Command::Tightness(a) => (commands::tightness(a)?, &a.out),
    };
    outcome.report.emit(out)?;
    Ok(outcome.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    growtight::pool::init_from_env();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("growtight: check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("growtight: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
