//! The uniform result envelope printed by every subcommand.

use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// What a subcommand produced: JSON payload plus its human-readable rendering.
pub struct Reply {
    pub ok: bool,
    pub payload: Value,
    pub text: String,
    pub diagnostics: Vec<String>,
}

impl Reply {
    pub fn ok(payload: Value, text: impl Into<String>) -> Self {
        Self {
            ok: true,
            payload,
            text: text.into(),
            diagnostics: Vec::new(),
        }
    }

    /// A completed run whose answer is negative, e.g. an invalid datum.
    pub fn fail(payload: Value, text: impl Into<String>, diagnostic: impl Into<String>) -> Self {
        Self {
            ok: false,
            payload,
            text: text.into(),
            diagnostics: vec![diagnostic.into()],
        }
    }

    pub fn note(mut self, diagnostic: impl Into<String>) -> Self {
        self.diagnostics.push(diagnostic.into());
        self
    }
}

#[derive(Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Serialize)]
pub struct CommandResult {
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

/// Error raised before a subcommand can produce a result.
#[derive(Debug)]
pub struct CliError(pub String);

impl From<upg_core::Error> for CliError {
    fn from(e: upg_core::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult = Result<Reply, CliError>;

/// Renders a reply, returning the process exit code.
pub fn emit(result: CliResult, json: bool) -> i32 {
    let (status, payload, text, diagnostics) = match result {
        Ok(r) => (
            if r.ok { Status::Ok } else { Status::Error },
            r.payload,
            r.text,
            r.diagnostics,
        ),
        Err(CliError(msg)) => (Status::Error, Value::Null, String::new(), vec![msg]),
    };
    let code = match status {
        Status::Ok => 0,
        Status::Error => 1,
    };
    // a closed pipe (e.g. `| head`) is not an error of the command
    let mut out = std::io::stdout().lock();
    if json {
        let envelope = CommandResult {
            status,
            payload,
            diagnostics,
        };
        let line = serde_json::to_string(&envelope).expect("JSON values serialize");
        let _ = writeln!(out, "{line}");
    } else {
        if !text.is_empty() {
            let _ = writeln!(out, "{text}");
        }
        for d in &diagnostics {
            eprintln!("{}: {d}", if code == 0 { "note" } else { "error" });
        }
    }
    code
}
