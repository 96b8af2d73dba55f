//! `goodbsq`: runs one subcommand and writes its tables, a summary and a
//! manifest into the output directory.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, RunConfig};
use error::{invalid, CliError};

fn threads() -> Result<usize, CliError> {
    match std::env::var("GOODBSQ_THREADS") {
        Err(_) => Ok(0),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(invalid("GOODBSQ_THREADS", format!("expected a positive integer, got {s:?}"))),
        },
    }
}

fn run(cli: Cli) -> Result<Vec<String>, CliError> {
    let config = RunConfig::resolve(cli.command.kind(), cli.command.opts())?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads()?)
        .build()
        .map_err(|e| CliError::Pool(e.to_string()))?;
    let artifacts = pool.install(|| commands::run(&config))?;
    output::write_all(&config, &artifacts)?;
    let mut lines = artifacts.summary;
    lines.push(format!("wrote {}", config.out.display()));
    Ok(lines)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
