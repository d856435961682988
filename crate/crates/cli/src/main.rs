use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    quantvar_cli::run(quantvar_cli::Cli::parse())
}
