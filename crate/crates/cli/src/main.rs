mod args;
mod commands;
mod config;
mod output;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

const EXIT_USAGE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_NUMERIC: u8 = 4;
pub(crate) const EXIT_VIOLATIONS: u8 = 5;

fn main() -> ExitCode {
    let argv = match config::expand(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_USAGE);
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Spec1d(a) => commands::spec1d(a),
        Command::Spec2d(a) => commands::spec2d(a),
        Command::Classify(a) => commands::classify(a),
        Command::Shift(a) => commands::shift(a),
        Command::Mnc(a) => commands::mnc(a),
        Command::Bifurcate(a) => commands::bifurcate(a),
    }
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(v) = std::env::var("SPECPOINT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| anyhow::anyhow!("SPECPOINT_THREADS must be a positive integer, got `{v}`"))?;
    anyhow::ensure!(n > 0, "SPECPOINT_THREADS must be positive");
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    use specpoint::Error;
    if e.downcast_ref::<args::UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Unsupported(_)) => EXIT_USAGE,
        Some(Error::Precondition(_) | Error::Domain { .. } | Error::Dimension { .. }) => EXIT_PRECONDITION,
        Some(
            Error::Evaluation { .. }
            | Error::Grid { .. }
            | Error::Admissibility { .. }
            | Error::Solver { .. }
            | Error::Numeric(_),
        ) => EXIT_NUMERIC,
        // I/O and serialization failures
        None => 1,
    }
}
