//! Result tables and their CSV/JSON encodings.
//!
//! Both encodings carry a metadata header (resolved configuration, version,
//! wall-clock time) and a data section (column names and rows). The data
//! section depends only on the configuration, so repeated runs produce
//! byte-identical data.
//!
//! CSV: metadata lines start with `#`; then a header line and one line per
//! row. Floats carry 17 significant digits (4 for rates), empty cells mark
//! unavailable values. JSON: `{"metadata": ..., "columns": [...], "rows":
//! [{column: value}]}` with shortest round-trip floats and `null` for empty
//! cells.

use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::OutputFormat;
use crate::{HarnessError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant digits for energies, errors, times and step sizes.
pub const FULL_DIGITS: usize = 17;
/// Significant digits for convergence rates.
pub const RATE_DIGITS: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    /// A float printed in CSV with the given number of significant digits.
    Float(f64, usize),
    Text(String),
    Empty,
}

impl Cell {
    pub fn full(v: f64) -> Self {
        Cell::Float(v, FULL_DIGITS)
    }

    pub fn rate(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, |r| Cell::Float(r, RATE_DIGITS))
    }

    pub fn opt(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::full)
    }

    fn csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Float(v, d) if v.is_finite() => format_sig(*v, *d),
            Cell::Float(..) | Cell::Empty => String::new(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(i) => Value::from(*i),
            Cell::Float(v, _) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }
}

/// `%g`-style formatting with `digits` significant digits: fixed notation
/// for decimal exponents in `[-4, digits)`, scientific otherwise.
pub fn format_sig(v: f64, digits: usize) -> String {
    assert!(digits >= 1);
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    // Round first, then read the exponent off the rounded value.
    let sci = format!("{:.*e}", digits - 1, v);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if exp < -4 || exp >= digits as i32 {
        sci
    } else {
        format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    /// Resolved configuration and other run facts.
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Seconds of wall-clock time; kept out of the data section.
    pub wall_clock_seconds: Option<f64>,
}

impl ResultTable {
    pub fn new(columns: Vec<String>) -> Self {
        let mut metadata = Map::new();
        metadata.insert("version".into(), Value::from(VERSION));
        Self { metadata, columns, rows: Vec::new(), wall_clock_seconds: None }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width differs from the column count");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str("# drudefd results\n");
        for (k, v) in &self.metadata {
            s.push_str(&format!("# {k}: {v}\n"));
        }
        if let Some(w) = self.wall_clock_seconds {
            s.push_str(&format!("# wall_clock_seconds: {w:.3}\n"));
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut meta = self.metadata.clone();
        if let Some(w) = self.wall_clock_seconds {
            meta.insert("wall_clock_seconds".into(), Value::from(w));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(self.columns.iter().cloned().zip(row.iter().map(Cell::json)).collect())
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(meta));
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON encoding");
        s.push('\n');
        s
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.to_csv(),
            OutputFormat::Json => self.to_json(),
        }
    }

    /// Writes to `path`, or to standard output when no path is given.
    pub fn emit(&self, format: OutputFormat, path: Option<&Path>) -> Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text)
                .map_err(|source| HarnessError::Io { path: p.to_path_buf(), source }),
            None => std::io::stdout()
                .lock()
                .write_all(text.as_bytes())
                .map_err(|source| HarnessError::Io { path: "<stdout>".into(), source }),
        }
    }
}

/// The data section of a CSV document: every line not starting with `#`.
pub fn csv_data_section(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}

/// The data section of a JSON document: its `columns` and `rows`.
pub fn json_data_section(text: &str) -> Result<Value> {
    let doc: Value = serde_json::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    Ok(serde_json::json!({ "columns": doc["columns"], "rows": doc["rows"] }))
}
