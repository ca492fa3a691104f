mod args;
mod commands;
mod input;
mod output;

use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;
use rieszspec::scenarios::preset;

use args::{Cli, Command};
use commands::Outcome;

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let (outcome, out) = match &cli.command {
        Command::Analyze(a) => (commands::analyze(a)?, a.common.out.as_deref()),
        Command::Oracle(a) => (commands::oracle(a)?, a.common.out.as_deref()),
        Command::Compare(a) => (commands::compare_cmd(a)?, a.common.out.as_deref()),
        Command::Export(a) => {
            let scenario = preset(&a.preset)?;
            let mut bytes = scenario.spec.to_json().into_bytes();
            bytes.push(b'\n');
            (Outcome { bytes, code: 0 }, a.out.as_deref())
        }
    };
    output::emit(&outcome.bytes, out)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    // usage errors share exit code 1 with every other error; 2 is reserved
    // for degenerate-only windows
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(&cli) {
        Ok(outcome) => ExitCode::from(outcome.code),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
