use std::io::Write;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use freesep::Error;

pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: Value,
    pub seed: u64,
    pub tool_version: &'static str,
    pub results_digest: String,
}

/// What a subcommand produced.
pub enum Output {
    Json(Value),
    /// JSON whose `extra` part (timings) is left out of the digest.
    JsonWithExtra(Value, Value),
    Text(String),
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidInput(_) | Error::RankMismatch { .. } | Error::Parse { .. } => 2,
        Error::Precondition(_) => 3,
        Error::Undecided { .. } | Error::Budget(_) => 4,
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidInput(_) => "invalid-input",
        Error::RankMismatch { .. } => "rank-mismatch",
        Error::Parse { .. } => "parse",
        Error::Precondition(_) => "precondition",
        Error::Undecided { .. } => "undecided",
        Error::Budget(_) => "budget",
    }
}

pub fn digest(value: &Value) -> String {
    let bytes = serde_json::to_vec(value).expect("json values serialize");
    hex::encode(Sha256::digest(&bytes))
}

fn manifest(command: &str, parameters: &Value, seed: u64, result: &Value) -> RunManifest {
    RunManifest {
        command: command.to_owned(),
        parameters: parameters.clone(),
        seed,
        tool_version: env!("CARGO_PKG_VERSION"),
        results_digest: digest(result),
    }
}

pub fn emit(command: &str, parameters: Value, seed: u64, outcome: freesep::Result<Output>, failed: bool) -> ExitCode {
    match outcome {
        Ok(Output::Text(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Output::Json(result)) => {
            let m = manifest(command, &parameters, seed, &result);
            print_json(&json!({ "schema": SCHEMA, "command": command, "result": result, "manifest": m }));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Ok(Output::JsonWithExtra(result, extra)) => {
            let m = manifest(command, &parameters, seed, &result);
            print_json(&json!({
                "schema": SCHEMA, "command": command, "result": result, "timings": extra, "manifest": m
            }));
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let code = exit_code(&e);
            print_json(&json!({
                "schema": SCHEMA,
                "command": command,
                "error": { "code": code, "kind": error_kind(&e), "message": e.to_string() },
            }));
            ExitCode::from(code)
        }
    }
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    let _ = writeln!(std::io::stdout(), "{text}");
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("results serialize")
}
