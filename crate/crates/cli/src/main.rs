use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mlti_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("mlti: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cli.output {
        Some(path) => fs::write(path, &out).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().write_all(out.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mlti: cannot write output: {e}");
            ExitCode::from(2)
        }
    }
}
