use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use edgelab_cli::{configure_threads, run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(&cli));
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if !outcome.output.is_empty() {
                let _ = stdout.write_all(outcome.output.as_bytes());
                if !outcome.output.ends_with('\n') {
                    let _ = stdout.write_all(b"\n");
                }
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(2)
        }
    }
}
