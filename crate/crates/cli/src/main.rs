mod args;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;
use run::{Outcome, Output};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli).and_then(|outcome| emit(&cli, outcome)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, outcome: Outcome) -> harmap_core::Result<bool> {
    let document = match outcome.output {
        Output::Report { json, text } => {
            if cli.json {
                pretty(&json)
            } else {
                text
            }
        }
        Output::Svg { svg, summary } => match &cli.out {
            // the SVG goes to the file; stdout gets a short summary
            Some(path) => {
                write_file(path, &svg)?;
                if cli.json {
                    print!("{}", pretty(&summary));
                } else {
                    println!("wrote {} ({} bytes)", path.display(), svg.len());
                }
                return Ok(outcome.pass);
            }
            None => svg,
        },
    };
    match &cli.out {
        Some(path) => write_file(path, &document)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(document.as_bytes())
                .map_err(|e| harmap_core::Error::Io(e.to_string()))?;
        }
    }
    Ok(outcome.pass)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn write_file(path: &std::path::Path, contents: &str) -> harmap_core::Result<()> {
    std::fs::write(path, contents).map_err(|e| harmap_core::Error::Io(format!("{}: {e}", path.display())))
}
