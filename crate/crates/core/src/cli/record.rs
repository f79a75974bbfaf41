//! Run records and their serialized forms.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::numeric::round_significant;
use crate::{Error, Result};

/// Bumped whenever the record layout changes.
pub const SCHEMA: &str = "modesplit-record/1";

pub const SIGNIFICANT_DIGITS: usize = 12;

/// A real rounded to 12 significant digits.
pub fn real(x: f64) -> Value {
    let r = round_significant(x, SIGNIFICANT_DIGITS);
    // Normalize -0 so that signed zeros never differ between runs.
    let r = if r == 0.0 { 0.0 } else { r };
    serde_json::Number::from_f64(r)
        .map(Value::Number)
        .unwrap_or_else(|| Value::String(r.to_string()))
}

pub fn reals(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| real(x)).collect())
}

/// `"re,im"` with each part rounded like [`real`].
pub fn complex_text(z: Complex64) -> String {
    let part = |x: f64| {
        let r = round_significant(x, SIGNIFICANT_DIGITS);
        if r == 0.0 { 0.0 } else { r }
    };
    format!("{},{}", part(z.re), part(z.im))
}

pub fn complex(z: Complex64) -> Value {
    Value::String(complex_text(z))
}

pub fn complexes(zs: &[Complex64]) -> Value {
    Value::Array(zs.iter().map(|&z| complex(z)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub schema: String,
    pub version: String,
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub rng_seed: u64,
    pub results: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunRecord {
    pub fn new(command: &str, rng_seed: u64) -> Self {
        Self {
            schema: SCHEMA.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            parameters: BTreeMap::new(),
            rng_seed,
            results: Value::Null,
            wall_time_ms: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.to_string(), value.into());
    }

    pub fn to_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("records serialize");
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }
}

/// A CSV table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn escape(field: &str) -> String {
        if field.contains([',', '"', '\n']) {
            format!("\"{}\"", field.replace('"', "\"\""))
        } else {
            field.to_string()
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let line = |fields: &[String]| {
            fields.iter().map(|f| Self::escape(f)).collect::<Vec<_>>().join(",") + "\n"
        };
        out.push_str(&line(&self.columns));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }
}

/// A real as a CSV cell, rounded like [`real`].
pub fn cell(x: f64) -> String {
    match real(x) {
        Value::Number(n) => n.to_string(),
        other => other.to_string(),
    }
}

/// Everything a command produces.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub record: RunRecord,
    pub tables: Vec<Table>,
    pub warnings: Vec<String>,
}

impl Report {
    /// CSV form: each table preceded by a `# name` line, tables separated by a
    /// blank line.
    pub fn to_csv(&self) -> String {
        self.tables
            .iter()
            .map(|t| format!("# {}\n{}", t.name, t.to_csv()))
            .collect::<Vec<_>>()
            .join("\n")
    }
}
