//! `sfunc`: command-line front end. Every command prints a versioned JSON
//! report; the exit status is 0 on pass, 1 on a mathematical failure and 2 on
//! a usage error.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use args::{Cli, Command};
use commands::{Failure, Outcome};

const SCHEMA: u32 = 1;

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Verify(a) => commands::verify(a),
        Command::Classify(a) => commands::classify(a),
        Command::Convert(a) => commands::convert(a),
        Command::Expand(a) => commands::expand(a),
        Command::Dwork(a) => commands::dwork(a),
        Command::Lab(c) => commands::lab(c),
        Command::Catalog(c) => commands::catalog(c),
    }
}

fn emit(cli: &Cli, out: Outcome) -> Result<bool, Failure> {
    let report = json!({
        "schema": SCHEMA,
        "command": out.command,
        "config": out.config,
        "pass": out.pass,
        "result": out.result,
    });
    let text = serde_json::to_string_pretty(&report).expect("json") + "\n";
    if let Some(path) = &cli.json {
        std::fs::write(path, &text).map_err(|e| Failure::Usage(format!("--json: {e}")))?;
    }
    if let Some(path) = &cli.csv {
        let csv = out
            .csv
            .as_deref()
            .ok_or_else(|| Failure::Usage(format!("--csv: '{}' has no tabular output", out.command)))?;
        std::fs::write(path, csv).map_err(|e| Failure::Usage(format!("--csv: {e}")))?;
    }
    if !cli.quiet {
        print!("{text}");
    }
    if cli.verbose {
        eprintln!("{}", out.summary);
    }
    Ok(out.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|out| emit(&cli, out)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
