//! `dnwave` — construct periodic dnoidal traveling waves of a coupled
//! Schrödinger–KdV system and certify their spectral stability claims
//! numerically.
//!
//! Subcommands: `wave` (profile + residuals), `check` (every spectral
//! record at one tuple), `figure1` (closed-form/oracle comparison table),
//! `sweep` (verdicts across a parameter grid), `selftest` (numerical
//! cross-check battery).
//!
//! Exit codes: 0 = checks passed, 1 = checked and failed, 2 = usage or
//! validation error, 3 = inconclusive (a certificate could not be decided
//! either way). Data goes to stdout (or `--out`); diagnostics to stderr.
//! Output is byte-identical across repeated runs, including parallel
//! sweeps: floats are printed with 17 significant digits and row order is
//! input order.

mod args;
mod commands;
mod output;
mod selftest;

use clap::Parser;

use args::{resolve, Cli, Cmd, FileConfig, OutputFormat};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// A command outcome that carries its own exit code: usage/validation
/// errors (2), honest check failures (1), and undecidable runs (3).
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn fail(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_FAIL,
            message: message.into(),
        }
    }

    pub fn inconclusive(message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_INCONCLUSIVE,
            message: message.into(),
        }
    }
}

/// Logging goes to stderr. `DNWAVE_LOG` picks the filter; without it the
/// level is warn (so sweep skips stay visible), or debug under
/// `--verbose`.
fn init_logging(verbose: bool) {
    let default = if verbose { "debug" } else { "warn" };
    env_logger::Builder::from_env(
        env_logger::Env::new()
            .filter("DNWAVE_LOG")
            .default_filter_or(default),
    )
    .init();
}

fn run(cli: Cli) -> Result<i32, Failure> {
    let file = match &cli.config {
        Some(path) => FileConfig::load(path).map_err(Failure::usage)?,
        None => FileConfig::default(),
    };

    match &cli.command {
        Cmd::Wave(common) => {
            let r = resolve(common, &file, OutputFormat::Json).map_err(Failure::usage)?;
            commands::cmd_wave(&r)
        }
        Cmd::Check(check) => {
            let r = resolve(&check.common, &file, OutputFormat::Json).map_err(Failure::usage)?;
            commands::cmd_check(&r, check.broken_coupling)
        }
        Cmd::Figure1(common) => {
            let r = resolve(common, &file, OutputFormat::Csv).map_err(Failure::usage)?;
            commands::cmd_figure1(&r)
        }
        Cmd::Sweep(common) => {
            let r = resolve(common, &file, OutputFormat::Csv).map_err(Failure::usage)?;
            commands::cmd_sweep(&r)
        }
        Cmd::Selftest(common) => {
            let r = resolve(common, &file, OutputFormat::Json).map_err(Failure::usage)?;
            selftest::cmd_selftest(&r, cli.verbose)
        }
    }
}

fn main() {
    // clap exits with code 2 on its own for malformed flags.
    let cli = Cli::parse();
    init_logging(cli.verbose);
    let code = match run(cli) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    };
    std::process::exit(code);
}
