mod args;
mod commands;
mod config;
mod error;
mod output;
mod range;

use std::process::ExitCode;

use clap::Parser;

use crate::args::Cli;
use crate::error::CliError;

fn run() -> Result<(), CliError> {
    let argv = config::expand(std::env::args_os().collect())?;
    let cli = Cli::try_parse_from(argv)?;
    log::debug!("running {}", cli.command.name());
    commands::run(cli.command)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(e)) => {
            let code = e.exit_code();
            let _ = e.print();
            ExitCode::from(code.clamp(0, 255) as u8)
        }
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
