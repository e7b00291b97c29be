use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use crepant_cli::{error_code, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("crepant: {e}");
            return ExitCode::from(error_code(&e) as u8);
        }
    };
    let written = match &cli.common.out {
        Some(path) => std::fs::write(path, &out.body),
        None => std::io::stdout().lock().write_all(out.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("crepant: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(out.code as u8)
}
