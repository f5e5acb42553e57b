//! The `dstar` command line: exact Ramsey search, coloring verification,
//! constructions, bound tables and figures, and the valid-point region.
//!
//! Exit codes: 0 success, 1 a checked property is false, 2 inconclusive
//! (budget exhausted), 64 usage, 65 unreadable or malformed input, 70
//! internal failure.

mod args;
mod bounds;
mod construct;
mod output;
mod ramsey;
mod validity;
mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use dstar_core::Error;

pub use args::Cli;

pub mod exit {
    pub const OK: i32 = 0;
    pub const FALSE: i32 = 1;
    pub const INCONCLUSIVE: i32 = 2;
    pub const USAGE: i32 = 64;
    pub const DATA: i32 = 65;
    pub const INTERNAL: i32 = 70;
}

/// Environment variable overriding the default node budget.
pub const BUDGET_ENV: &str = "DSTAR_BUDGET";

/// A failure together with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }

    pub fn data(message: impl Into<String>) -> Self {
        Self {
            code: exit::DATA,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self {
            code: exit::INTERNAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Usage(_) | Error::Resource(_) => exit::USAGE,
            Error::Parse { .. } | Error::Validation(_) => exit::DATA,
            Error::Internal(_) | Error::Io(_) => exit::INTERNAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::internal(format!("write failed: {e}"))
    }
}

pub type CmdResult = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command,
/// writing normal output to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "dstar: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run_with(args, &mut stdout.lock(), &mut stderr.lock());
    let _ = std::io::stdout().flush();
    code
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> CmdResult {
    use args::Command;
    match cli.command {
        Command::Ramsey(a) => ramsey::run(a, out),
        Command::Verify(a) => verify::run(a, out),
        Command::Construct(a) => construct::run(a, out),
        Command::Bounds(a) => bounds::run(a, out),
        Command::Validity(a) => validity::run(a, out),
    }
}
