//! Report assembly and rendering.
//!
//! Every run produces exactly one document on standard output.  JSON is
//! rendered from fixed-order structs, so identical (command, config, seed)
//! inputs produce byte-identical output.  CSV mode emits the command's main
//! table when it has one (matrices, dimension tables, pairing tables) and
//! otherwise the per-check summary, with RFC-style quoting.

use serde::Serialize;
use serde_json::Value;

/// One verified property: name, outcome, and on failure a witness pinpointing
/// the violating instance.
#[derive(Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckResult {
    pub fn pass(name: &str) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            witness: None,
            detail: None,
        }
    }

    pub fn pass_with(name: &str, detail: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: true,
            witness: None,
            detail: Some(detail),
        }
    }

    pub fn fail(name: &str, witness: Value) -> Self {
        CheckResult {
            name: name.to_string(),
            passed: false,
            witness: Some(witness),
            detail: None,
        }
    }

    pub fn from_flag(name: &str, ok: bool, witness: Value) -> Self {
        if ok {
            CheckResult::pass(name)
        } else {
            CheckResult::fail(name, witness)
        }
    }

    pub fn prefixed(mut self, prefix: &str) -> Self {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

/// Tabular payload used by CSV output.
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

/// Everything a command produces: its checks, a JSON data payload, and an
/// optional table for CSV mode.
pub struct CommandOutput {
    pub checks: Vec<CheckResult>,
    pub data: Option<Value>,
    pub table: Option<CsvTable>,
}

impl CommandOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// The single JSON document written to standard output.
#[derive(Serialize)]
pub struct Report {
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub checks: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data: Option<Value>,
    pub passed: bool,
}

pub fn render_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serialization");
    s.push('\n');
    s
}

/// CSV rendering: the main table when present, otherwise the check summary.
pub fn render_csv(report: &Report, table: Option<&CsvTable>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    match table {
        Some(t) => {
            w.write_record(&t.header).expect("csv header");
            for row in &t.rows {
                w.write_record(row).expect("csv row");
            }
        }
        None => {
            w.write_record(["check", "passed", "witness"]).expect("csv header");
            for c in &report.checks {
                let witness = c
                    .witness
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_default();
                w.write_record([c.name.as_str(), if c.passed { "true" } else { "false" }, &witness])
                    .expect("csv row");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("csv buffer")).expect("csv utf8")
}
