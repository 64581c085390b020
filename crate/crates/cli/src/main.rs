use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use gapforge_cli::{commands, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(finished) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(finished.stdout.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(finished.code)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
