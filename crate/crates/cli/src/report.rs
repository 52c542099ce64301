use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use bstorder::Error;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Verification(String),
    SizeLimit(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
            CliError::SizeLimit(_) => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Verification(_) => "verification",
            CliError::SizeLimit(_) => "size-limit",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Input(m)
            | CliError::Verification(m)
            | CliError::SizeLimit(m) => m,
        }
    }
}

/// Library errors carry 0-based vertex ids; users see 1-based ones.
pub fn describe(e: &Error) -> String {
    match e {
        Error::Loop(v) => format!("loop at vertex {}", v + 1),
        Error::Digon(u, v) => format!("digon between {} and {}", u + 1, v + 1),
        Error::MissingArc(u, v) => format!(
            "not a tournament: no arc between {} and {}",
            u + 1,
            v + 1
        ),
        Error::OutOfRange { vertex, n } => {
            format!("vertex {} out of range 1..={n}", vertex + 1)
        }
        Error::NotALeaf(v) => format!("vertex {} is not a leaf", v + 1),
        other => other.to_string(),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => CliError::SizeLimit(describe(&e)),
            _ => CliError::Input(describe(&e)),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn verification(msg: impl Into<String>) -> CliError {
    CliError::Verification(msg.into())
}

#[derive(Clone, Debug, Serialize)]
pub struct Digest256 {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

impl Digest256 {
    pub fn of(path: &Path, data: &[u8]) -> Self {
        let hash = Sha256::digest(data);
        let mut hex = String::with_capacity(64);
        for b in hash {
            let _ = write!(hex, "{b:02x}");
        }
        Digest256 {
            path: path.display().to_string(),
            sha256: hex,
            bytes: data.len(),
        }
    }
}

/// What a command hands back to the driver.
#[derive(Default)]
pub struct Outcome {
    pub result: Value,
    pub mode: BTreeMap<&'static str, Value>,
    /// Names of the independent checks the result passed.
    pub checks: Vec<String>,
    /// Human-readable summary for `--emit text`.
    pub text: String,
    /// Output in one of the library's file formats, if the command makes one.
    pub artifact: Option<String>,
}

impl Outcome {
    pub fn new(result: Value, text: impl Into<String>) -> Self {
        Outcome {
            result,
            text: text.into(),
            ..Outcome::default()
        }
    }

    pub fn mode(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.mode.insert(key, value.into());
        self
    }

    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> CliResult<()> {
        let name = name.into();
        if !ok {
            return Err(verification(format!("check failed: {name}")));
        }
        self.checks.push(name);
        Ok(())
    }

    pub fn artifact(mut self, text: String) -> Self {
        self.artifact = Some(text);
        self
    }
}

#[derive(Serialize)]
pub struct Report<'a> {
    pub schema: u32,
    pub command: &'a [String],
    pub inputs: &'a BTreeMap<String, Digest256>,
    pub seed: u64,
    pub mode: &'a BTreeMap<&'static str, Value>,
    pub result: &'a Value,
    pub verification: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<Digest256>,
    pub timing_ms: f64,
}

pub fn error_report(
    command: &[String],
    inputs: &BTreeMap<String, Digest256>,
    err: &CliError,
) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "inputs": inputs,
        "error": {
            "code": err.code(),
            "kind": err.kind(),
            "message": err.message(),
        },
    })
}
