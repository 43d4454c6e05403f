//! Report shape shared by every subcommand, in text and JSON.

use std::fmt::{self, Write as _};

use serde::Serialize;
use serde_json::{Map, Value};

/// Failures that are not verdicts.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 2.
    Input(String),
    /// A checked invariant of the library failed; exit code 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub fn input_error(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn internal_error(e: impl fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub affirmative: bool,
    pub summary: String,
}

/// `{command, inputs, verdict, certificates, residuals, timings}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: Verdict,
    pub certificates: Map<String, Value>,
    pub residuals: Map<String, Value>,
    pub timings: Map<String, Value>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            verdict: Verdict { affirmative: false, summary: String::new() },
            certificates: Map::new(),
            residuals: Map::new(),
            timings: Map::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn certificate(&mut self, key: &str, value: impl Into<Value>) {
        self.certificates.insert(key.to_string(), value.into());
    }

    pub fn residual(&mut self, key: &str, value: impl Into<Value>) {
        self.residuals.insert(key.to_string(), value.into());
    }

    pub fn timing(&mut self, key: &str, seconds: f64) {
        self.timings.insert(key.to_string(), Value::from(seconds));
    }

    pub fn conclude(mut self, affirmative: bool, summary: impl Into<String>) -> Self {
        self.verdict = Verdict { affirmative, summary: summary.into() };
        self
    }

    /// 0 for an affirmative verdict, 1 for a negative one.
    pub fn exit_code(&self) -> i32 {
        if self.verdict.affirmative {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dvs {}", self.command);
        let _ = writeln!(out, "verdict: {}", self.verdict.summary);
        for (title, map) in [
            ("inputs", &self.inputs),
            ("certificates", &self.certificates),
            ("residuals", &self.residuals),
            ("timings", &self.timings),
        ] {
            if map.is_empty() {
                continue;
            }
            let _ = writeln!(out, "{title}:");
            for (k, v) in map {
                write_value(&mut out, k, v, 1);
            }
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) if !map.is_empty() => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, v) in map {
                write_value(out, k, v, depth + 1);
            }
        }
        Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
            let _ = writeln!(out, "{pad}{key}:");
            for item in items {
                let line: Vec<String> = match item {
                    Value::Object(m) => m.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect(),
                    other => vec![scalar(other)],
                };
                let _ = writeln!(out, "{pad}  - {}", line.join(", "));
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{pad}{key}: [{}]", parts.join(", "));
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(other));
        }
    }
}
