use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = aerial_mec::cli::Cli::parse();
    match aerial_mec::cli::run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
