use std::process::ExitCode;

use clap::Parser;
use cosymp_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::iter::once("cosymp".to_string())
        .chain(std::env::args().skip(1))
        .collect::<Vec<_>>()
        .join(" ");
    match run(&cli, echo) {
        Ok(report) => {
            if cli.global.quiet {
                println!("{}", report.summary());
            } else {
                print!("{}", report.render());
            }
            ExitCode::from(report.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(CliError::EXIT_CODE as u8)
        }
    }
}
