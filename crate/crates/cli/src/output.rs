use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use spectra_sect::Error;

use crate::config::{Format, RunConfig};

/// Rows for CSV output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Result of a subcommand before rendering.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    /// Machine-readable cause of a failed check.
    pub reason: Option<String>,
    pub report: Value,
    pub table: Option<Table>,
}

impl Outcome {
    pub fn pass(report: impl Serialize) -> Self {
        Outcome {
            passed: true,
            reason: None,
            report: to_value(report),
            table: None,
        }
    }

    /// Passes iff `reason` is `None`.
    pub fn checked(reason: Option<&str>, report: impl Serialize) -> Self {
        Outcome {
            passed: reason.is_none(),
            reason: reason.map(str::to_string),
            report: to_value(report),
            table: None,
        }
    }

    pub fn with_table(mut self, table: Table) -> Self {
        self.table = Some(table);
        self
    }
}

pub fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("serializable report")
}

/// Failure raised before or during a subcommand.
#[derive(Debug)]
pub enum Failure {
    Math(Error),
    Usage { reason: &'static str, message: String },
}

impl Failure {
    pub fn usage(reason: &'static str, message: impl Into<String>) -> Self {
        Failure::Usage {
            reason,
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Math(e) if !e.is_input_error() => 1,
            _ => 2,
        }
    }

    pub fn reason(&self) -> &str {
        match self {
            Failure::Math(e) => e.reason(),
            Failure::Usage { reason, .. } => reason,
        }
    }

    pub fn message(&self) -> String {
        match self {
            Failure::Math(e) => e.to_string(),
            Failure::Usage { message, .. } => message.clone(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Math(e)
    }
}

pub fn render_outcome(command: &str, cfg: &RunConfig, outcome: &Outcome) -> Result<String, Failure> {
    match cfg.format {
        Format::Json => {
            let mut doc = json!({
                "command": command,
                "status": if outcome.passed { "pass" } else { "fail" },
            });
            if let Some(r) = &outcome.reason {
                doc["reason"] = json!(r);
            }
            doc["config"] = to_value(cfg);
            doc["report"] = outcome.report.clone();
            Ok(line(&doc))
        }
        Format::Csv => {
            let table = outcome.table.as_ref().ok_or_else(|| {
                Failure::usage("unsupported_format", format!("`{command}` has no CSV form; use --format json"))
            })?;
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&table.header).map_err(csv_error)?;
            for row in &table.rows {
                w.write_record(row).map_err(csv_error)?;
            }
            let bytes = w.into_inner().map_err(|e| Failure::usage("io_error", e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

fn csv_error(e: csv::Error) -> Failure {
    Failure::usage("io_error", e.to_string())
}

/// Failures are always JSON, whatever the requested format.
pub fn render_failure(command: &str, failure: &Failure) -> String {
    line(&json!({
        "command": command,
        "status": "error",
        "reason": failure.reason(),
        "message": failure.message(),
    }))
}

fn line(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("serializable report");
    s.push('\n');
    s
}

pub fn write(out: Option<&Path>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Formats a float for CSV; `inf`, `-inf` and `nan` are spelled out.
pub fn cell(v: f64) -> String {
    if v.is_finite() {
        format!("{v}")
    } else if v.is_nan() {
        "nan".into()
    } else if v > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}
