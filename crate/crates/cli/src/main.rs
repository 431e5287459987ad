//! `bipdo`: command-line front end for bipdo-core.

mod args;
mod commands;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Format};
use commands::{Outcome, Overrides, Res};

fn init_threads() -> Res<()> {
    let Ok(v) = std::env::var("BIPDO_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| format!("BIPDO_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("BIPDO_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn emit(cli: &Cli, outcome: &Outcome) -> io::Result<()> {
    let mut w: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.format {
        Format::Json => output::write_json(&mut w, &outcome.json)?,
        Format::Csv => outcome.table.write(&mut w)?,
    }
    w.flush()
}

fn run(cli: &Cli) -> Res<Outcome> {
    init_threads()?;
    let mut overrides = Overrides::new(cli.tolerances.clone());
    let outcome = commands::run(&cli.command, &mut overrides)?;
    overrides.finish()?;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cli, &outcome) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
