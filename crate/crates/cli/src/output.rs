use serde::Serialize;
use serde_json::{Map, Value};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    Num(f64),
    Int(u64),
    Bool(bool),
    Empty,
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}
impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}
impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}
impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}
impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}
impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}
impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Rows with a fixed column set, rendered as CSV (with a provenance comment) or JSON.
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Significant digits for floating-point cells.
    pub sig_digits: usize,
}

impl Table {
    pub fn new(columns: Vec<&'static str>, digits: u32) -> Self {
        // f64 carries at most 17 significant digits
        Table { columns, rows: Vec::new(), sig_digits: (digits as usize).min(17) }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn fmt_num(&self, v: f64) -> String {
        if v.is_nan() {
            "nan".into()
        } else if v.is_infinite() {
            if v > 0.0 { "inf".into() } else { "-inf".into() }
        } else {
            format!("{:.*e}", self.sig_digits - 1, v)
        }
    }

    fn text(&self, c: &Cell) -> String {
        match c {
            Cell::Str(s) => s.clone(),
            Cell::Num(v) => self.fmt_num(*v),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    pub fn to_csv(&self, header: &str) -> io::Result<Vec<u8>> {
        let mut buf = Vec::new();
        writeln!(buf, "# {header}")?;
        {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(&self.columns)?;
            for row in &self.rows {
                w.write_record(row.iter().map(|c| self.text(c)))?;
            }
            w.flush()?;
        }
        Ok(buf)
    }

    pub fn to_json(&self) -> io::Result<Vec<u8>> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut m = Map::new();
                for (name, c) in self.columns.iter().zip(row) {
                    let v = match c {
                        Cell::Str(s) => Value::String(s.clone()),
                        // keep the same digits as the CSV; non-finite values become strings
                        Cell::Num(x) if x.is_finite() => {
                            serde_json::from_str(&self.fmt_num(*x)).unwrap_or(Value::Null)
                        }
                        Cell::Num(x) => Value::String(self.fmt_num(*x)),
                        Cell::Int(i) => Value::from(*i),
                        Cell::Bool(b) => Value::Bool(*b),
                        Cell::Empty => Value::Null,
                    };
                    m.insert(name.to_string(), v);
                }
                Value::Object(m)
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&rows)?;
        out.push(b'\n');
        Ok(out)
    }

    pub fn write(&self, format: Format, header: &str, out: Option<&Path>) -> io::Result<()> {
        let bytes = match format {
            Format::Csv => self.to_csv(header)?,
            Format::Json => self.to_json()?,
        };
        match out {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                w.write_all(&bytes)?;
                w.flush()
            }
            None => io::stdout().lock().write_all(&bytes),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_share_fields() {
        let mut t = Table::new(vec!["a", "b", "note"], 30);
        t.push(vec![Cell::Num(0.1), Cell::Int(3), "x, y".into()]);
        t.push(vec![Cell::Num(f64::INFINITY), Cell::Empty, Cell::Bool(true)]);
        let csv = String::from_utf8(t.to_csv("run").unwrap()).unwrap();
        assert!(csv.starts_with("# run\na,b,note\n"));
        assert!(csv.contains("\"x, y\""));
        assert!(csv.contains("1.0000000000000001e-1"));
        let json: Value = serde_json::from_slice(&t.to_json().unwrap()).unwrap();
        assert_eq!(json[0]["b"], 3);
        assert_eq!(json[1]["a"], "inf");
        assert_eq!(json[0]["a"].as_f64().unwrap(), 0.1);
    }
}
