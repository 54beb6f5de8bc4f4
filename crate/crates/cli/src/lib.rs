//! Command-line front end for `structured-spectra`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit code: 0 success, 2 usage error, 3 invalid value or configuration,
//! 4 I/O failure, 5 a verification check failed.

mod args;
mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format, Suite, Threads};

/// Environment fallback for `--threads`.
pub const THREADS_ENV: &str = "STRUCTURED_SPECTRA_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_IO: i32 = 4;
pub const EXIT_CHECK_FAILED: i32 = 5;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid value for {flag}: {message}")]
    Validation { flag: &'static str, message: String },
    #[error("{}", library_message(.0))]
    Library(#[from] structured_spectra::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation { .. } | CliError::Library(_) => EXIT_VALIDATION,
            CliError::Io { .. } => EXIT_IO,
        }
    }

    pub(crate) fn invalid(flag: &'static str, message: impl Into<String>) -> Self {
        CliError::Validation {
            flag,
            message: message.into(),
        }
    }
}

/// Names the flag most likely responsible for a library error.
fn library_message(e: &structured_spectra::Error) -> String {
    use structured_spectra::Error as E;
    let flag = match e {
        E::IncompatibleDimension { .. } | E::LengthMismatch { .. } => "--n",
        E::BudgetExceeded { .. } => "--n/--m/--k (or raise --budget)",
        E::InvalidArgument(_) | E::IndexOutOfRange { .. } => "arguments",
        E::NoConvergence { .. } | E::NonFinite(_) | E::TooManySkipped { .. } => {
            return format!("computation failed: {e}")
        }
    };
    format!("invalid value for {flag}: {e}")
}

/// What a command produced: the bytes for the primary output and whether
/// every check it ran passed.
pub(crate) struct Outcome {
    pub bytes: Vec<u8>,
    pub passed: bool,
}

/// Runs the tool with the process's stdout and stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams. `argv[0]` is the program name.
pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    let _ = write!(stdout, "{}", e.render());
                    return EXIT_OK;
                }
                ErrorKind::InvalidValue | ErrorKind::ValueValidation => EXIT_VALIDATION,
                _ => EXIT_USAGE,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };

    match execute(&cli) {
        Ok(outcome) => conclude(&cli, &outcome, stdout, stderr),
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

/// Writes the output; a failed check still writes its report before exiting 5.
fn conclude(cli: &Cli, outcome: &Outcome, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if let Err(e) = emit(cli, &outcome.bytes, stdout) {
        let _ = writeln!(stderr, "error: {e}");
        return e.exit_code();
    }
    if outcome.passed {
        EXIT_OK
    } else {
        let _ = writeln!(stderr, "error: one or more checks failed");
        EXIT_CHECK_FAILED
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let threads = cli.threads.unwrap_or(Threads::Auto);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(match threads {
            Threads::Auto => 0,
            Threads::Count(n) => n,
        })
        .build()
        .map_err(|e| CliError::invalid("--threads", e.to_string()))?;
    pool.install(|| commands::dispatch(&cli.command))
}

fn emit(cli: &Cli, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command.out() {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        }),
        None => stdout.write_all(bytes).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
