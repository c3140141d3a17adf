//! Command-line front end for `wdl_core`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error,
//! 4 certification failure.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;
use wdl_core::Space;

use crate::args::{Cli, Command};
use crate::commands::Destination;
pub use crate::error::CliError;

/// Caps the worker pool; unset means one worker per hardware thread.
pub const THREADS_VAR: &str = "WDL_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR}='{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("{THREADS_VAR}: {e}")))
}

pub fn execute(command: &Command) -> Result<(), CliError> {
    configure_threads()?;
    let flags = command.flags();
    let mut config = flags.resolve()?;
    let dest = Destination {
        out: flags.out.clone(),
        pgm: flags.pgm,
        gnuplot: flags.gnuplot,
    };
    match command {
        Command::Scan(_) => commands::scan(&config, &dest),
        Command::Wigner(_) => {
            config.space = Space::Phase;
            commands::wigner(&config, &dest)
        }
        Command::Attenuation(_) => commands::attenuation(&config, &dest),
        Command::Verify(_) => commands::verify(&config, &dest),
        Command::Sweep(_) => commands::sweep(&config, &dest),
    }
}

/// Parses `args`, runs the command and maps failures to exit codes.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wdl: {e}");
            e.into()
        }
    }
}
