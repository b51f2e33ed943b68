//! `spincheck`: derive determining equations, verify the catalog of
//! superintegrable two-spin systems, and print canonical operator forms.
//!
//! Exit codes: 0 when every check passed, 2 when only flagged open
//! questions remain, 1 on any other failure, 3 on a usage error.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use commands::{CliError, EXIT_USAGE};

fn run(cli: &Cli) -> Result<commands::Outcome, CliError> {
    if cli.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global()
            .map_err(|e| CliError { message: e.to_string(), code: commands::EXIT_FAILURE })?;
    }
    match &cli.command {
        Command::Derive(a) => commands::derive(a, cli.report),
        Command::Verify(a) => commands::verify(a, cli.report),
        Command::Symmetrize(a) => commands::symmetrize(a),
        Command::GaugeCheck => commands::gauge_check(cli.report),
        Command::Dump(a) => commands::dump(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            ExitCode::from(outcome.code as u8)
        }
        Err(e) => {
            eprintln!("spincheck: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
