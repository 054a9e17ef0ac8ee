//! CSV and JSON-lines emission with fixed significant digits.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::args::Format;
use crate::error::Result;

/// Significant digits for probabilities and amplitudes.
pub const VALUE_DIGITS: usize = 17;
/// Significant digits for grid coordinates and parameters.
pub const GRID_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Value(f64),
    Grid(f64),
    Int(u64),
    Text(String),
}

fn sig(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits - 1, x)
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Value(x) => sig(*x, VALUE_DIGITS),
            Cell::Grid(x) => sig(*x, GRID_DIGITS),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> String {
        match self {
            Cell::Value(x) | Cell::Grid(x) if !x.is_finite() => "null".into(),
            Cell::Text(s) => serde_json::to_string(s).expect("string serializes"),
            other => other.csv(),
        }
    }
}

pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn write_to<W: Write>(&self, w: W, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                let mut out = csv::Writer::from_writer(w);
                out.write_record(&self.header)?;
                for row in &self.rows {
                    out.write_record(row.iter().map(Cell::csv))?;
                }
                out.flush()?;
            }
            Format::Record => {
                let mut w = w;
                for row in &self.rows {
                    let fields: Vec<String> = self
                        .header
                        .iter()
                        .zip(row)
                        .map(|(k, c)| {
                            format!("{}:{}", serde_json::to_string(k).expect("key"), c.json())
                        })
                        .collect();
                    writeln!(w, "{{{}}}", fields.join(","))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Writes `tables` to `path`, or to stdout separated by blank lines.
pub fn emit(path: Option<&Path>, format: Format, tables: &[&Table]) -> Result<()> {
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p)?);
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                t.write_to(&mut w, format)?;
            }
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    writeln!(w)?;
                }
                t.write_to(&mut w, format)?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits() {
        assert_eq!(Cell::Value(0.1).csv(), "1.0000000000000001e-1");
        assert_eq!(Cell::Grid(0.5).csv(), "5.00000000000e-1");
        assert_eq!(Cell::Value(0.1).csv().parse::<f64>().unwrap(), 0.1);
        let x = 1.0 / 3.0;
        assert_eq!(Cell::Value(x).csv().parse::<f64>().unwrap(), x);
    }

    #[test]
    fn csv_and_record() {
        let mut t = Table::new(&["k", "R", "method"]);
        t.rows.push(vec![
            Cell::Grid(2.0),
            Cell::Value(1.0 / 9.0),
            Cell::Text("plane-wave".into()),
        ]);
        let mut buf = Vec::new();
        t.write_to(&mut buf, Format::Csv).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "k,R,method\n2.00000000000e0,1.1111111111111110e-1,plane-wave\n"
        );

        let mut buf = Vec::new();
        t.write_to(&mut buf, Format::Record).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["R"].as_f64().unwrap(), 1.0 / 9.0);
        assert_eq!(v["method"], "plane-wave");
    }

    #[test]
    fn non_finite_records_are_null() {
        let mut t = Table::new(&["x"]);
        t.rows.push(vec![Cell::Value(f64::NAN)]);
        let mut buf = Vec::new();
        t.write_to(&mut buf, Format::Record).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "{\"x\":null}\n");
    }
}
