//! Run reports, rendered as JSON or as plain text.

use std::time::Instant;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::exactlin::AbelianInvariants;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> Self {
        InputDigest { path: path.to_string(), sha256: hex::encode(Sha256::digest(bytes)) }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub stage: String,
    pub millis: f64,
}

/// One record per invocation. `strategy` and `early_exit` are null for
/// commands that do not scan for commuting pairs.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub p: Option<u64>,
    pub results: Value,
    pub timings: Vec<Timing>,
    pub tool_version: String,
    pub strategy: Option<String>,
    pub early_exit: Option<bool>,
    /// Human-readable lines, also used for the text rendering.
    pub summary: Vec<String>,
    pub diagnostics: Vec<String>,
    pub output_file: Option<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            inputs: Vec::new(),
            p: None,
            results: Value::Object(Default::default()),
            timings: Vec::new(),
            tool_version: TOOL_VERSION.to_string(),
            strategy: None,
            early_exit: None,
            summary: Vec::new(),
            diagnostics: Vec::new(),
            output_file: None,
        }
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report values serialize");
        self.results.as_object_mut().expect("results is an object").insert(key.to_string(), v);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.summary.push(s.into());
    }

    /// Runs `f` and records its wall time under `stage`.
    pub fn timed<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.push(Timing { stage: stage.to_string(), millis: t.elapsed().as_secs_f64() * 1e3 });
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in &self.summary {
            out.push_str(s);
            out.push('\n');
        }
        for d in &self.diagnostics {
            out.push_str("note: ");
            out.push_str(d);
            out.push('\n');
        }
        if let Some(f) = &self.output_file {
            out.push_str(&format!("wrote {f}\n"));
        }
        out
    }
}

/// Invariant factors as a plain list, e.g. `[5, 25]`; `[]` when trivial.
pub fn invariant_list(a: &AbelianInvariants) -> Vec<Value> {
    a.torsion()
        .iter()
        .map(|d| match u64::try_from(d) {
            Ok(x) => Value::from(x),
            Err(_) => Value::from(d.to_string()),
        })
        .collect()
}
