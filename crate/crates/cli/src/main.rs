use std::process::ExitCode;

use clap::Parser;
use gapseq_cli::RunConfig;

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match gapseq_cli::run(&config) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
