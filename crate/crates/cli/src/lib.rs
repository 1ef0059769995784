//! The `urkit` command line: state construction, moment and uncertainty
//! reports, parameter scans, oscillator trajectories, distances and the
//! acceptance self-test.
//!
//! Structured output is JSON, tabular output CSV. Errors are written to
//! stderr as `{"kind": ..., "message": ...}`; contract violations exit with
//! 2, numeric failures with 1 and usage errors with 64.

// `!(x > 0.0)` style checks reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use urkit_core::Error;

mod distance;
mod evolve;
mod report;
mod scan;
mod selftest;
mod state;

pub use report::{observable_set_for, ReportOutput};
pub use scan::{scan_points, ScanPoint};

/// Cutoff used when neither `--cutoff` nor `URKIT_CUTOFF` is given.
pub const DEFAULT_CUTOFF: usize = 128;
/// Environment variable overriding [`DEFAULT_CUTOFF`].
pub const CUTOFF_ENV: &str = "URKIT_CUTOFF";

pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_CONTRACT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "urkit", version, about = "Squeezed and intelligent states and their uncertainty relations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a named state family and write its JSON record.
    State(state::StateArgs),
    /// Moments and uncertainty gaps of one or more stored states.
    Report(report::ReportArgs),
    /// Uncertainty gaps over a parameter grid, as CSV.
    Scan(scan::ScanArgs),
    /// Squeezing trajectory of a time-dependent oscillator, as CSV.
    Evolve(evolve::EvolveArgs),
    /// Observable-weighted overlap and distance of two stored states.
    Distance(distance::DistanceArgs),
    /// Run the acceptance suite and print one line per criterion.
    Selftest(selftest::SelftestArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutArg {
    /// Output file (stdout when absent).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

/// Everything that can stop a command.
#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Core(e) => e.to_string(),
            CliError::Io(m) => m.clone(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if !e.is_contract_violation() => EXIT_NUMERIC,
            _ => EXIT_CONTRACT,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "kind": self.kind(), "message": self.message() }).to_string()
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub(crate) fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Core(Error::InvalidInput(msg.into()))
}

/// Resolves the cutoff: flag, then `URKIT_CUTOFF`, then the default.
pub fn resolve_cutoff(flag: Option<usize>) -> CliResult<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(CUTOFF_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| invalid(format!("{CUTOFF_ENV} must be a positive integer, got {s:?}"))),
        Err(_) => Ok(DEFAULT_CUTOFF),
    }
}

/// Parses `1,2,3`.
pub fn parse_orders(s: &str) -> CliResult<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .ok()
                .filter(|r| *r >= 1)
                .ok_or_else(|| invalid(format!("bad order {t:?} in {s:?}")))
        })
        .collect()
}

/// Splits `key=value`.
pub(crate) fn key_value(s: &str) -> CliResult<(String, String)> {
    s.split_once('=')
        .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
        .filter(|(k, _)| !k.is_empty())
        .ok_or_else(|| invalid(format!("expected key=value, got {s:?}")))
}

pub(crate) fn read_file(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Writes to the `--out` file, or to `stdout` when none was given.
pub(crate) fn emit(out: &OutArg, stdout: &mut dyn Write, text: &str) -> CliResult<()> {
    match &out.out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

/// Runs a parsed command. Returns the exit code for commands that can
/// finish without an error but still report failure (`selftest`).
pub fn run(cli: Cli, stdout: &mut dyn Write) -> CliResult<i32> {
    match cli.command {
        Command::State(a) => state::run(&a, stdout),
        Command::Report(a) => report::run(&a, stdout),
        Command::Scan(a) => scan::run(&a, stdout),
        Command::Evolve(a) => evolve::run(&a, stdout),
        Command::Distance(a) => distance::run(&a, stdout),
        Command::Selftest(a) => selftest::run(&a, stdout),
    }
}

/// Parses `argv` (program name first) and runs it, printing errors to
/// `stderr`. Returns the process exit code.
pub fn execute<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            e.exit_code()
        }
    }
}
