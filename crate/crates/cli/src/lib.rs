//! Library side of the `otk` binary: argument definitions, the subcommands
//! and the exit-code contract (0 success, 1 selftest failure, 2 argument,
//! parse or dimension error, 3 window or enumeration-guard failure, 4 I/O).

pub mod args;
pub mod commands;
pub mod selftest;

use std::fmt;

use otk_core::OtkError;

use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SELFTEST: i32 = 1;
pub const EXIT_ARGUMENT: i32 = 2;
pub const EXIT_WINDOW: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<OtkError> for CliError {
    fn from(e: OtkError) -> Self {
        let code = match e {
            OtkError::Argument(_) | OtkError::Dimension { .. } | OtkError::Parse { .. } => EXIT_ARGUMENT,
            OtkError::Guard { .. } | OtkError::Window(_) => EXIT_WINDOW,
            OtkError::Io { .. } => EXIT_IO,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Recover(a) => commands::recover(a),
        Command::Grid(a) => commands::grid(a),
        Command::Ptc(a) => commands::ptc(a),
        Command::Bounds(a) => commands::bounds(a),
        Command::Ric(a) => commands::ric(a),
        Command::Selftest => {
            println!("# otk selftest");
            let failed = selftest::run_all();
            if failed == 0 {
                Ok(())
            } else {
                Err(CliError {
                    code: EXIT_SELFTEST,
                    message: format!("{failed} selftest check(s) failed"),
                })
            }
        }
    }
}
