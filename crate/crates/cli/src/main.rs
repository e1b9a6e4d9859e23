//! `hqc-dfs`: command-line front end. Exit status 0 means every check
//! passed, 1 a failed check or computation, 2 a usage error.

mod angles;
mod args;
mod commands;
mod config;
mod error;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::CommandName;
use error::{CliError, CliResult};

fn emit(body: &str, out: Option<&std::path::Path>) -> CliResult<()> {
    let mut text = body.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display())))
        }
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string())),
    }
}

fn execute(cli: &Cli) -> CliResult<bool> {
    let name = match cli.command {
        Command::Gate(_) => CommandName::Gate,
        Command::Verify(_) => CommandName::Verify,
        Command::Sweep(_) => CommandName::Sweep,
        Command::Noise(_) => CommandName::Noise,
        Command::All(_) => CommandName::All,
    };
    let (cfg, rt) = config::resolve(name, cli.command.args())?;
    let outcome = commands::run(name, &cfg, &rt)?;
    emit(&outcome.body, rt.out.as_deref())?;
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
