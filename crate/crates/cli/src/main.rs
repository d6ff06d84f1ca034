mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Output};
use commands::{Failure, Outcome};

/// Caps the worker pool of the parallel kernels when `QKZ_ON_THREADS` is set.
fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("QKZ_ON_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("QKZ_ON_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure {threads} threads: {e}")))
}

fn emit(outcome: &Outcome, output: &Output) -> std::io::Result<()> {
    let text = outcome.report.render(output.format);
    match &output.out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Verify(a) => commands::verify(a).map(|o| (o, &a.output)),
        Command::Qkz(a) => commands::qkz(a).map(|o| (o, &a.output)),
        Command::Ed(a) => commands::ed(a).map(|o| (o, &a.output)),
        Command::Thermo(a) => commands::thermo(a).map(|o| (o, &a.output)),
        Command::Table(a) => commands::table(a).map(|o| (o, &a.output)),
    });
    match result {
        Ok((outcome, output)) => {
            if let Err(e) = emit(&outcome, output) {
                eprintln!("error: cannot write the report: {e}");
                return ExitCode::FAILURE;
            }
            if outcome.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("some checks did not pass");
                ExitCode::FAILURE
            }
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("error: numerical failure: {e}");
            ExitCode::FAILURE
        }
    }
}
