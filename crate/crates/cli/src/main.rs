mod args;
mod commands;
mod output;
mod svg;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use output::{digits_from_env, CliResult, Fmt};

fn run(cli: &Cli) -> CliResult<String> {
    let f = Fmt {
        digits: digits_from_env()?,
    };
    match &cli.command {
        Command::Rates(a) => commands::rates(a, f),
        Command::Thresholds(a) => commands::thresholds(a, f),
        Command::Converge(a) => commands::converge(a, f),
        Command::Verify(a) => commands::verify(a, f),
        Command::Simulate(a) => commands::simulate(a, f),
        Command::Classify(a) => commands::classify(a, f),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
