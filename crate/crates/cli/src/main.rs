use std::process::ExitCode;

use clap::Parser;
use holodisk_cli::config::Cli;
use holodisk_cli::{commands, exit, exit_code, CliError};

fn write_output(cli: &Cli, text: &str) -> Result<(), CliError> {
    let out = cli.opts.out.clone().or_else(|| {
        cli.opts.config.as_ref().and_then(|p| holodisk_cli::RunConfig::from_file(p).ok()).and_then(|c| c.out)
    });
    match out {
        Some(path) => std::fs::write(&path, text).map_err(|source| CliError::Io { path, source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match commands::run(&cli).and_then(|o| write_output(&cli, &o.text).map(|_| o.status)) {
        Ok(status) => exit_code(status),
        Err(e) => {
            eprintln!("holodisk: {e}");
            exit::INPUT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
