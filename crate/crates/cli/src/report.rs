use std::time::Duration;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail,
    Inconsistent,
    Usage,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Inconsistent => 2,
            Outcome::Usage => 64,
        }
    }

    fn word(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconsistent => "internal inconsistency",
            Outcome::Usage => "usage error",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Everything a command prints. Entries keep their insertion order, so the
/// rendered report is a function of the inputs alone; timings are only
/// included on request.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub outcome: Outcome,
    pub summary: String,
    pub input_sha256: Option<String>,
    entries: Vec<(String, Value)>,
    timings: Vec<(String, Duration)>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        Report {
            command: command.into(),
            outcome: Outcome::Pass,
            summary: String::new(),
            input_sha256: None,
            entries: Vec::new(),
            timings: Vec::new(),
        }
    }

    pub fn finish(&mut self, outcome: Outcome, summary: impl Into<String>) {
        self.outcome = outcome;
        self.summary = summary.into();
    }

    pub fn hash_input(&mut self, bytes: &[u8]) {
        self.input_sha256 = Some(sha256_hex(bytes));
    }

    pub fn put(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.entries.push((key.into(), value.into()));
    }

    /// Records a block of `key: value` or free text lines as a list.
    pub fn put_lines(&mut self, key: impl Into<String>, text: &str) {
        let lines: Vec<Value> = text.lines().map(|l| Value::String(l.to_string())).collect();
        self.entries.push((key.into(), Value::Array(lines)));
    }

    pub fn time(&mut self, stage: impl Into<String>, d: Duration) {
        self.timings.push((stage.into(), d));
    }

    pub fn render(&self, format: Format, with_timings: bool) -> String {
        match format {
            Format::Json => {
                let mut details = Map::new();
                for (k, v) in &self.entries {
                    details.insert(k.clone(), v.clone());
                }
                let mut top = json!({
                    "tool": "cevian",
                    "version": env!("CARGO_PKG_VERSION"),
                    "command": self.command,
                    "verdict": self.outcome.word(),
                    "exit_code": self.outcome.code(),
                    "summary": self.summary,
                    "input_sha256": self.input_sha256,
                    "details": details,
                });
                if with_timings {
                    let t: Map<String, Value> = self
                        .timings
                        .iter()
                        .map(|(k, d)| (k.clone(), json!(d.as_millis() as u64)))
                        .collect();
                    top["timings_ms"] = Value::Object(t);
                }
                let mut s = serde_json::to_string_pretty(&top).expect("json values serialize");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = format!("cevian {} :: {}\n", env!("CARGO_PKG_VERSION"), self.command);
                if let Some(h) = &self.input_sha256 {
                    out.push_str(&format!("input sha256: {h}\n"));
                }
                for (k, v) in &self.entries {
                    match v {
                        Value::Array(items) => {
                            out.push_str(&format!("{k}:\n"));
                            for item in items {
                                out.push_str(&format!("  {}\n", plain(item)));
                            }
                        }
                        other => out.push_str(&format!("{k}: {}\n", plain(other))),
                    }
                }
                if with_timings {
                    for (k, d) in &self.timings {
                        out.push_str(&format!("time {k}: {} ms\n", d.as_millis()));
                    }
                }
                out.push_str(&format!("verdict: {}", self.outcome.word()));
                if !self.summary.is_empty() {
                    out.push_str(&format!(" ({})", self.summary));
                }
                out.push('\n');
                out
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
