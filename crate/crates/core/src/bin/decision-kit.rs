use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use decision_kit::cli::{run, Cli, EXIT_DATA_ERROR};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(text.as_bytes())
                .and_then(|()| stdout.flush())
                .is_err()
            {
                return ExitCode::from(EXIT_DATA_ERROR as u8);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_DATA_ERROR as u8)
        }
    }
}
