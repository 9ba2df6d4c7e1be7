//! Record formatting shared by every subcommand.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde_json::{Map, Value};

pub const MIN_PRECISION: u8 = 6;
pub const MAX_PRECISION: u8 = 17;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct OutputSpec {
    pub format: Format,
    pub path: Option<PathBuf>,
    pub precision: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl From<f64> for Field {
    fn from(v: f64) -> Self {
        Field::Num(v)
    }
}

impl From<usize> for Field {
    fn from(v: usize) -> Self {
        Field::Int(v as i64)
    }
}

impl From<u8> for Field {
    fn from(v: u8) -> Self {
        Field::Int(v.into())
    }
}

impl From<&str> for Field {
    fn from(v: &str) -> Self {
        Field::Text(v.to_owned())
    }
}

/// Named fields of one output record, in column order.
pub type Record = Vec<(&'static str, Field)>;

/// `v` rounded to `digits` significant decimal digits.
pub fn round_to(v: f64, digits: u8) -> f64 {
    if !v.is_finite() || v == 0.0 || digits >= MAX_PRECISION {
        return v;
    }
    format!("{:.*e}", usize::from(digits - 1), v)
        .parse()
        .unwrap_or(v)
}

/// Shortest decimal string that parses back to `round_to(v, digits)`.
pub fn format_number(v: f64, digits: u8) -> String {
    // + 0.0 turns -0 into 0
    let v = round_to(v, digits) + 0.0;
    if v.is_nan() {
        return "NaN".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

fn json_number(v: f64, digits: u8) -> Value {
    serde_json::Number::from_f64(round_to(v, digits)).map_or(Value::Null, Value::Number)
}

impl OutputSpec {
    fn sink(&self) -> io::Result<Box<dyn Write>> {
        Ok(match &self.path {
            Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
            None => Box::new(io::BufWriter::new(io::stdout().lock())),
        })
    }

    /// Writes `rows` in the chosen format. `meta` is only used by JSON.
    pub fn emit(&self, meta: &[(&'static str, Field)], rows: &[Record]) -> io::Result<()> {
        let mut out = self.sink()?;
        match self.format {
            Format::Csv => self.write_csv(&mut out, rows)?,
            Format::Json => self.write_json(&mut out, meta, rows)?,
        }
        out.flush()
    }

    fn cell(&self, f: &Field) -> String {
        match f {
            Field::Num(v) => format_number(*v, self.precision),
            Field::Int(v) => v.to_string(),
            Field::Text(s) => s.clone(),
            Field::Empty => String::new(),
        }
    }

    fn write_csv(&self, out: &mut dyn Write, rows: &[Record]) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        if let Some(first) = rows.first() {
            w.write_record(first.iter().map(|(k, _)| *k))?;
        }
        for row in rows {
            w.write_record(row.iter().map(|(_, f)| self.cell(f)))?;
        }
        w.flush()
    }

    fn object(&self, fields: &[(&'static str, Field)]) -> Value {
        let mut m = Map::new();
        for (k, f) in fields {
            let v = match f {
                Field::Num(v) => json_number(*v, self.precision),
                Field::Int(v) => Value::from(*v),
                Field::Text(s) => Value::String(s.clone()),
                Field::Empty => Value::Null,
            };
            m.insert((*k).to_owned(), v);
        }
        Value::Object(m)
    }

    fn write_json(
        &self,
        out: &mut dyn Write,
        meta: &[(&'static str, Field)],
        rows: &[Record],
    ) -> io::Result<()> {
        let mut top = Map::new();
        top.insert("meta".into(), self.object(meta));
        top.insert(
            "rows".into(),
            Value::Array(rows.iter().map(|r| self.object(r)).collect()),
        );
        serde_json::to_writer_pretty(&mut *out, &Value::Object(top))?;
        writeln!(out)
    }
}
