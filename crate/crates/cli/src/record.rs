//! Flat output records and their CSV / JSON-lines encodings.
//!
//! Floats are written in shortest round-trip form so every value parses back
//! to the identical `f64`.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Number, Value as Json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Float(f64),
    Int(u64),
    Bool(bool),
    Text(String),
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Float(v) => format_float(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Json {
        match self {
            Value::Float(v) => Number::from_f64(*v).map_or(Json::Null, Json::Number),
            Value::Int(v) => Json::from(*v),
            Value::Bool(v) => Json::Bool(*v),
            Value::Text(s) => Json::String(s.clone()),
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

/// Shortest representation that round-trips; `inf` / `NaN` for non-finite.
pub fn format_float(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{v:?}")
    }
}

/// Ordered key/value pairs, inputs first.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputRecord {
    fields: Vec<(&'static str, Value)>,
}

impl OutputRecord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.fields.push((key, value.into()));
        self
    }

    pub fn keys(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.fields.iter().map(|(k, _)| *k)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }
}

/// Writes records sharing one schema; the CSV header comes from the first.
pub fn write_records<W: Write>(out: &mut W, records: &[OutputRecord], format: Format) -> io::Result<()> {
    match format {
        Format::Csv => {
            if let Some(first) = records.first() {
                writeln!(out, "{}", first.keys().collect::<Vec<_>>().join(","))?;
            }
            for rec in records {
                let row: Vec<String> = rec.fields.iter().map(|(_, v)| v.csv()).collect();
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Format::Json => {
            for rec in records {
                let obj: Map<String, Json> = rec
                    .fields
                    .iter()
                    .map(|(k, v)| ((*k).to_owned(), v.json()))
                    .collect();
                writeln!(out, "{}", Json::Object(obj))?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1, 1e-7, 6.2, 1.0, 123456789.125, 2.5e-300, f64::MAX] {
            let s = format_float(v);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), v.to_bits(), "{s}");
        }
        assert_eq!(format_float(f64::INFINITY), "inf");
        assert_eq!(format_float(f64::NAN), "NaN");
        assert_eq!(format_float(1.0), "1.0");
    }

    #[test]
    fn csv_and_json_layouts() {
        let rec = OutputRecord::new()
            .push("x", 0.5)
            .push("feasible", true)
            .push("branch", "lower")
            .push("n", 3u64)
            .push("bad", f64::NAN);
        let mut csv = Vec::new();
        write_records(&mut csv, &[rec.clone(), rec.clone()], Format::Csv).unwrap();
        assert_eq!(
            String::from_utf8(csv).unwrap(),
            "x,feasible,branch,n,bad\n0.5,true,lower,3,NaN\n0.5,true,lower,3,NaN\n"
        );
        let mut json = Vec::new();
        write_records(&mut json, &[rec], Format::Json).unwrap();
        assert_eq!(
            String::from_utf8(json).unwrap(),
            "{\"x\":0.5,\"feasible\":true,\"branch\":\"lower\",\"n\":3,\"bad\":null}\n"
        );
    }
}
