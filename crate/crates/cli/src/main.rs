use std::process::ExitCode;

use clap::Parser;

use otk_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match otk_cli::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
