//! Report schema and output.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::{Format, RunConfig};

#[derive(Clone, Debug, Serialize)]
pub struct Residual {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub tool_version: &'static str,
    pub config: RunConfig,
    pub rows: Vec<R>,
    pub residuals: Vec<Residual>,
    pub passed: bool,
}

impl<R: Serialize> Report<R> {
    pub fn new(config: RunConfig, rows: Vec<R>, residuals: Vec<Residual>) -> Self {
        let passed = residuals.iter().all(|r| r.passed);
        Self {
            tool_version: env!("CARGO_PKG_VERSION"),
            config,
            rows,
            residuals,
            passed,
        }
    }

    /// JSON carries everything; CSV carries the rows only.
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => serde_json::to_string_pretty(self)
                .map(|s| s + "\n")
                .map_err(|e| e.to_string()),
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &self.rows {
                    w.serialize(r).map_err(|e| e.to_string())?;
                }
                let bytes = w.into_inner().map_err(|e| e.to_string())?;
                String::from_utf8(bytes).map_err(|e| e.to_string())
            }
        }
    }
}

/// Writes to `out`, or stdout when absent.
pub fn write_out(text: &str, out: Option<&Path>) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}
