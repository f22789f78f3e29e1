use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Rows with a fixed column order, written as a JSON array of objects, CSV
/// with a header, or tab-separated text.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let objects: Vec<Value> =
                    self.rows.iter().map(|r| object(&self.columns, r)).collect();
                writeln!(out, "{}", Value::Array(objects))
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(plain))?;
                }
                w.flush()
            }
            Format::Text => {
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(plain).collect();
                    writeln!(out, "{}", cells.join("\t"))?;
                }
                Ok(())
            }
        }
    }
}

/// A JSON object with keys in column order.
pub fn object(columns: &[&str], row: &[Value]) -> Value {
    let mut map = serde_json::Map::new();
    for (k, v) in columns.iter().zip(row) {
        map.insert((*k).to_string(), v.clone());
    }
    Value::Object(map)
}

/// Cell text without JSON quoting.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(plain).collect();
            format!("[{}]", inner.join(","))
        }
        other => other.to_string(),
    }
}
