//! `ditec` — trace-transform image descriptors and domain classification.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, invalid
//! parameter combinations), 2 on data errors (unreadable corpus, stale
//! cache, undecodable input).

mod commands;
mod options;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use commands::ExitMapping;
use options::Cli;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            // clap renders help to stdout and errors to stderr.
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
