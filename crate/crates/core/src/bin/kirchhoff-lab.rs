use std::process::ExitCode;

use clap::Parser;
use kirchhoff_lab::cli::{run, Cli, ErrorReport};
use kirchhoff_lab::Error;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            for line in &outcome.summary {
                println!("{line}");
            }
            for f in &outcome.files {
                println!("wrote {}", f.display());
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            let report = ErrorReport::new(cli.command.name(), &err);
            eprintln!(
                "{}",
                serde_json::to_string_pretty(&report).expect("serializable")
            );
            match err {
                Error::Config(_) | Error::Hypothesis(_) | Error::Toml(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
