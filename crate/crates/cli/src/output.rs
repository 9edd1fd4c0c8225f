use std::fmt::Write as _;

use serde_json::{Map, Value};

use crate::config::Format;

/// A rectangular result table plus free-form metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub command: &'static str,
    /// Column headers with units in parentheses.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: Map<String, Value>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&str]) -> Self {
        Self {
            command,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: Map::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Value>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    /// Values of the column whose header starts with `name`.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self
            .columns
            .iter()
            .position(|c| c.split(" (").next() == Some(name))?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        for row in &self.rows {
            for (k, x) in row.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                write!(s, "{}", float(*x)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(|x| json_float(*x)).collect()))
            .collect();
        let mut top = Map::new();
        top.insert("command".into(), self.command.into());
        top.insert("metadata".into(), Value::Object(self.metadata.clone()));
        top.insert("columns".into(), self.columns.clone().into());
        top.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(top)).unwrap();
        s.push('\n');
        s
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn float(x: f64) -> String {
    if x.is_nan() {
        "NaN".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x == 0.0 || (1e-5..1e16).contains(&x.abs()) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// JSON has no NaN; non-finite values become null.
pub fn json_float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}
