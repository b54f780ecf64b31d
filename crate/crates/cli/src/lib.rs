//! Command-line front end: argument parsing, parameter resolution and
//! CSV/JSON emission for the multiport splitter experiments.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::Parser;
use multiport_core::experiments::ExperimentResult;

use crate::args::{Cli, Command};
use crate::config::{ConfigFile, Resolver};
use crate::error::{CliError, CliResult};

/// Runs one command and returns the process exit code. Errors are written to
/// stderr as a single JSON line.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let err = CliError::Usage(e.to_string().lines().next().unwrap_or("").to_owned());
            eprintln!("{}", err.to_line());
            return err.exit_code();
        }
    };
    match execute(&cli.command) {
        Ok((csv, sidecar)) => {
            println!("{}", csv.display());
            println!("{}", sidecar.display());
            0
        }
        Err(err) => {
            eprintln!("{}", err.to_line());
            err.exit_code()
        }
    }
}

fn dispatch(command: &Command, cfg: &ConfigFile) -> CliResult<ExperimentResult> {
    match command {
        Command::Balance(a) => commands::balance(a, cfg),
        Command::Matrix(a) => commands::matrix(a, cfg),
        Command::Interferometer(a) => commands::interferometer(a, cfg),
        Command::ScanInteractions(a) => commands::scan_interactions(a, cfg),
        Command::ScanTiming(a) => commands::scan_timing(a, cfg),
        Command::Loss(a) => commands::loss(a, cfg),
        Command::Spectrum(a) => commands::spectrum(a, cfg),
        Command::Scaling(a) => commands::scaling(a, cfg),
        Command::Tunneling(a) => commands::tunneling(a, cfg),
    }
}

/// Resolves the shared flags, runs the command on a sized thread pool and
/// writes its artifacts.
pub fn execute(command: &Command) -> CliResult<(PathBuf, PathBuf)> {
    let start = Instant::now();
    let common = command.common();
    let cfg = match &common.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    // Only the shared keys are read here; each command validates the rest.
    let shared = Resolver::new_unchecked(&cfg);
    let threads = shared.opt::<usize>("threads", &common.threads)?;
    let seed = shared.get::<u64>("seed", &common.seed, 0)?;
    let seed = i64::try_from(seed).map_err(|_| CliError::Schema(format!("--seed: {seed} is too large")))?;
    let timings = shared.flag("timings", common.timings)?;
    let output = common
        .output
        .clone()
        .or_else(|| cfg.get("output").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", command.name())));
    output::artifact_paths(&output)?;
    if threads == Some(0) {
        return Err(CliError::Schema("--threads must be >= 1".into()));
    }

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Schema(format!("cannot start {threads:?} worker threads: {e}")))?;
    let mut result = pool.install(|| dispatch(command, &cfg))?;
    result.parameters.push(("seed".into(), multiport_core::experiments::Value::Int(seed)));
    let elapsed = start.elapsed().as_secs_f64();
    let timing_record = timings.then(|| vec![("total_seconds".to_owned(), elapsed)]);
    output::write_artifacts(&result, &output, timing_record.as_deref())
}
