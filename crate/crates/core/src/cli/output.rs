//! Summary JSON, long-format series CSV and `%.17g` number formatting.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};

pub const SERIES_HEADER: [&str; 4] = ["experiment", "x", "quantity", "value"];

/// One row of the long-format series.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub x: f64,
    pub quantity: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub tool: String,
    pub version: String,
    pub experiment: String,
    pub config: ExperimentConfig,
    /// Headline verdict of the experiment.
    pub verdict: String,
    pub verdicts: BTreeMap<String, String>,
    /// Measured constants; `null` when a quantity could not be computed.
    pub constants: BTreeMap<String, Option<f64>>,
    pub notes: Vec<String>,
    pub results: serde_json::Value,
}

/// Error report written next to the outputs and to stderr.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub error: String,
    pub message: String,
    pub exit_code: i32,
}

impl Diagnostic {
    pub fn new(err: &Error, exit_code: i32) -> Self {
        Diagnostic {
            error: err.kind().to_string(),
            message: err.to_string(),
            exit_code,
        }
    }
}

/// C `printf("%.17g")`.
pub fn fmt_g17(x: f64) -> String {
    const P: i32 = 17;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // the exponent after rounding to P significant digits decides the style
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn summary_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".summary.json")
}

pub fn series_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".series.csv")
}

pub fn error_path(prefix: &Path) -> PathBuf {
    with_suffix(prefix, ".error.json")
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::config(format!("cannot write {}: {e}", path.display()))
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    }
    Ok(())
}

pub fn write_series(path: &Path, experiment: &str, rows: &[Row]) -> Result<()> {
    ensure_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| io_error(path, e))?;
    w.write_record(SERIES_HEADER).map_err(|e| io_error(path, e))?;
    for r in rows {
        w.write_record([experiment, &fmt_g17(r.x), &r.quantity, &fmt_g17(r.value)])
            .map_err(|e| io_error(path, e))?;
    }
    w.flush().map_err(|e| io_error(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    ensure_parent(path)?;
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}
