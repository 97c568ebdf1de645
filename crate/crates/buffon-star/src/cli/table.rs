//! Tabular output with a stable schema: fixed column order, floats
//! serialized with 17 significant digits in both CSV and JSON.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use super::RunManifest;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// 17 significant digits: enough to reconstruct the exact f64.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(i) => i.to_string(),
            Cell::Float(v) => format_float(*v),
            Cell::Empty => String::new(),
        }
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Text(s) => serializer.serialize_str(s),
            Cell::Int(i) => serializer.serialize_i64(*i),
            Cell::Float(v) => RawValue::from_string(format_float(*v))
                .map_err(serde::ser::Error::custom)?
                .serialize(serializer),
            Cell::Empty => serializer.serialize_none(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// UTF-8 CSV with a header row; numeric cells never need quoting.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    /// JSON object `{manifest, columns, rows}` with the manifest inline.
    pub fn to_json(&self, manifest: &RunManifest) -> String {
        #[derive(Serialize)]
        struct Payload<'a> {
            manifest: &'a RunManifest,
            columns: &'a [String],
            rows: Rows<'a>,
        }
        struct Rows<'a>(&'a [Vec<Cell>]);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for row in self.0 {
                    seq.serialize_element(row)?;
                }
                seq.end()
            }
        }
        serde_json::to_string_pretty(&Payload {
            manifest,
            columns: &self.columns,
            rows: Rows(&self.rows),
        })
        .expect("table serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_17_significant_digits() {
        assert_eq!(format_float(0.2), "2.0000000000000001e-1");
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
        // round-trips exactly
        for v in [0.1, 1.0 / 3.0, 2.5e-17, -123.456] {
            assert_eq!(format_float(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["i", "p"]);
        t.push(vec![Cell::Int(0), Cell::Float(0.5)]);
        t.push(vec![Cell::Int(1), Cell::Empty]);
        assert_eq!(t.to_csv(), "i,p\n0,5.0000000000000000e-1\n1,\n");
    }

    #[test]
    fn json_floats_keep_digit_count() {
        let mut t = Table::new(&["p"]);
        t.push(vec![Cell::Float(0.2)]);
        let m = RunManifest::new("test", None);
        let json = t.to_json(&m);
        assert!(json.contains("2.0000000000000001e-1"));
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed["rows"][0][0].as_f64().unwrap(), 0.2);
        assert_eq!(parsed["manifest"]["command"], "test");
    }
}
