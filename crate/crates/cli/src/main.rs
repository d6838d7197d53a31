mod args;
mod run;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::Parser;
use geography_core::{Error, ErrorClass};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use args::Command;

pub const SCHEMA: &str = "geography-report/1";

#[derive(Debug, Parser)]
#[command(name = "geography", version, about = "Exact geography of simply connected 4-manifolds")]
struct Cli {
    /// Seed for randomised steps; recorded in every report.
    #[arg(long, global = true, env = "GEOGRAPHY_SEED", default_value_t = 0)]
    seed: u64,
    /// Write the report (or CSV) here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Serialize, Deserialize)]
struct Envelope {
    schema: String,
    command: String,
    config: Command,
    seed: u64,
    generated_unix: u64,
    result: Value,
}

#[derive(Debug, Serialize)]
struct ErrorReport<'a> {
    schema: &'a str,
    command: &'a str,
    class: ErrorClass,
    exit_code: i32,
    kind: String,
    message: String,
}

fn now() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn render(envelope: &Envelope) -> Result<String, Error> {
    serde_json::to_string_pretty(envelope).map(|s| s + "\n").map_err(|e| Error::Internal(e.to_string()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Internal(format!("{}: {e}", path.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| Error::Internal(e.to_string())),
    }
}

fn report(command: &Command, seed: u64) -> Result<(Envelope, bool), Error> {
    let outcome = run::execute(command, seed)?;
    let envelope = Envelope {
        schema: SCHEMA.into(),
        command: command.name().into(),
        config: command.clone(),
        seed,
        generated_unix: now(),
        result: outcome.result,
    };
    Ok((envelope, outcome.success))
}

fn replay(path: &Path) -> Result<(String, bool), Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    let original: Envelope =
        serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
    if original.schema != SCHEMA {
        return Err(Error::Malformed(format!("unsupported schema {:?}", original.schema)));
    }
    let (mut fresh, _) = report(&original.config, original.seed)?;
    fresh.generated_unix = original.generated_unix;
    let identical = render(&fresh)? == text;
    let summary = serde_json::json!({
        "schema": SCHEMA,
        "command": "replay",
        "report": path.display().to_string(),
        "replayed": original.command,
        "identical": identical,
    });
    let rendered = serde_json::to_string_pretty(&summary).map_err(|e| Error::Internal(e.to_string()))? + "\n";
    Ok((rendered, identical))
}

fn dispatch(cli: &Cli) -> Result<bool, Error> {
    match &cli.command {
        Command::Replay(a) => {
            let (text, identical) = replay(&a.report)?;
            emit(cli.out.as_deref(), &text)?;
            Ok(identical)
        }
        Command::Map(a) => {
            let csv = run::map_csv(a)?;
            emit(cli.out.as_deref(), &csv)?;
            Ok(true)
        }
        command => {
            let (envelope, success) = report(command, cli.seed)?;
            emit(cli.out.as_deref(), &render(&envelope)?)?;
            Ok(success)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(ErrorClass::Malformed.exit_code() as u8),
            };
        }
    };
    match dispatch(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(ErrorClass::Internal.exit_code() as u8),
        Err(e) => {
            let class = e.class();
            let body = ErrorReport {
                schema: "geography-error/1",
                command: cli.command.name(),
                class,
                exit_code: class.exit_code(),
                kind: e.kind(),
                message: e.to_string(),
            };
            eprintln!("{}", serde_json::to_string(&body).unwrap_or_else(|_| e.to_string()));
            ExitCode::from(class.exit_code() as u8)
        }
    }
}
