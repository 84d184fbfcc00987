//! `vstates` command-line front end.

mod args;
mod commands;
mod output;
mod verify;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::CliError;

fn run(cli: &Cli, invocation: &str) -> Result<ExitCode, CliError> {
    match &cli.command {
        Command::Spectrum(a) => commands::spectrum(a, invocation)?,
        Command::Phi(a) => commands::phi_profile(a, invocation)?,
        Command::Verify(a) => {
            if !verify::verify(a, invocation)? {
                eprintln!("verification failed: suite {}", a.suite);
                return Ok(ExitCode::from(2));
            }
        }
        Command::Branch(a) => commands::branch(a, invocation)?,
        Command::Models(a) => commands::models(a)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut words = vec!["vstates".to_string()];
    words.extend(argv.into_iter().skip(1));
    let invocation = words.join(" ");
    match run(&cli, &invocation) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
