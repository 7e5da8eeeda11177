use std::process::ExitCode;

use clap::Parser;
use mandala_cli::args::Cli;
use mandala_cli::{run, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            for note in &outcome.notes {
                eprintln!("note: {note}");
            }
            print!("{}", outcome.summary);
            for path in &outcome.written {
                println!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            if let CliError::Corpus(e) = &err {
                for issue in e.issues() {
                    eprintln!("  {issue}");
                }
            }
            ExitCode::from(err.exit_code())
        }
    }
}
