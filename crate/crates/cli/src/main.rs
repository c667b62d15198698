use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use synclat_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if let Err(e) = stdout.write_all(out.artifact.as_bytes()).and_then(|_| stdout.flush()) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            for note in &out.notes {
                eprintln!("{note}");
            }
            if out.mismatch {
                ExitCode::from(4)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
