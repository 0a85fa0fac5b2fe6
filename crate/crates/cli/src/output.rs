//! Tables rendered as CSV or JSON.

use std::io::Write;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::error::CliResult;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug)]
pub enum Cell {
    Int(i128),
    Float(f64),
    Text(String),
    Rational(BigRational),
    Bool(bool),
    Ints(Vec<i128>),
    Empty,
}

impl From<i128> for Cell {
    fn from(v: i128) -> Self {
        Cell::Int(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<BigRational> for Cell {
    fn from(v: BigRational) -> Self {
        Cell::Rational(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

/// Shortest decimal that round-trips.
fn float_text(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v}")
    }
}

fn big_json(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

fn int_json(v: i128) -> Value {
    match i64::try_from(v) {
        Ok(i) => json!(i),
        Err(_) => json!(v.to_string()),
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => float_text(*v),
            Cell::Text(s) => s.clone(),
            Cell::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Cell::Bool(b) => b.to_string(),
            Cell::Ints(v) => v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => int_json(*v),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => json!(s),
            Cell::Rational(r) => json!({"num": big_json(r.numer()), "den": big_json(r.denom())}),
            Cell::Bool(b) => json!(b),
            Cell::Ints(v) => Value::Array(v.iter().map(|&x| int_json(x)).collect()),
            Cell::Empty => Value::Null,
        }
    }
}

/// Rows under a fixed header. A `single` table renders as one JSON object.
#[derive(Clone, Debug)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub single: bool,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new(), single: false }
    }

    pub fn single(columns: &[&'static str], row: Vec<Cell>) -> Self {
        let mut t = Self::new(columns);
        t.push(row);
        t.single = true;
        t
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> CliResult<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                w.flush()?;
            }
            Format::Json => {
                let objects: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let map: Map<String, Value> =
                            self.columns.iter().zip(row).map(|(c, v)| (c.to_string(), v.json())).collect();
                        Value::Object(map)
                    })
                    .collect();
                let value = if self.single && objects.len() == 1 {
                    objects.into_iter().next().unwrap_or(Value::Null)
                } else {
                    Value::Array(objects)
                };
                serde_json::to_writer_pretty(&mut *out, &value).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn render(t: &Table, f: Format) -> String {
        let mut buf = Vec::new();
        t.write(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn rationals_and_floats() {
        let mut t = Table::new(&["r", "x", "l", "e"]);
        let r = BigRational::new(BigInt::from(-3), BigInt::from(4));
        t.push(vec![r.into(), 0.1.into(), Cell::Ints(vec![1, 0, 3]), Cell::Empty]);
        assert_eq!(render(&t, Format::Csv), "r,x,l,e\n-3/4,0.1,1 0 3,\n");
        let v: Value = serde_json::from_str(&render(&t, Format::Json)).unwrap();
        assert_eq!(v[0]["r"], json!({"num": -3, "den": 4}));
        assert_eq!(v[0]["x"], json!(0.1));
        assert_eq!(v[0]["e"], Value::Null);
    }

    #[test]
    fn single_tables_are_objects() {
        let t = Table::single(&["a"], vec![Cell::Int(5)]);
        let v: Value = serde_json::from_str(&render(&t, Format::Json)).unwrap();
        assert_eq!(v, json!({"a": 5}));
    }
}
