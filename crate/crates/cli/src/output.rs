use std::fs;
use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Top-level shape shared by every JSON report.
#[derive(Debug, Serialize)]
pub struct Report<'a, C, R, S> {
    pub tool_version: &'static str,
    pub config: &'a C,
    pub results: &'a [R],
    pub summary: S,
}

impl<'a, C: Serialize, R: Serialize, S: Serialize> Report<'a, C, R, S> {
    pub fn new(config: &'a C, results: &'a [R], summary: S) -> Self {
        Report { tool_version: TOOL_VERSION, config, results, summary }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| CliError::Eval(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

/// 17 significant digits, enough to round-trip any binary64.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for row in rows {
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Eval(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Eval(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Eval(e.to_string())
}

/// Writes to standard output for `-`, otherwise to the named file.
pub fn emit(out: &str, text: &str) -> CliResult<()> {
    if out == "-" {
        let mut stdout = io::stdout().lock();
        match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
            // a closed reader (e.g. `| head`) is not a failure of the run
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
            other => other?,
        }
    } else {
        fs::write(out, text)?;
    }
    Ok(())
}
