use std::process::ExitCode;

use clap::Parser;

use mucs_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("mucs: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
