//! Table rendering: `%.12g` numbers, a `#` reproducibility header, CSV or JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// `x` with 12 significant digits, formatted like C's `%.12g`.
pub fn g12(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(usize),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            // fields are never quoted
            Cell::Text(s) => s.replace(',', ";").replace('\n', " "),
            Cell::Num(x) => g12(*x),
            Cell::Int(n) => n.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Num(x) => number(*x),
            Cell::Int(n) => json!(n),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

/// JSON number rounded to 12 significant digits; non-finite values become null.
pub fn number(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    g12(x).parse::<f64>().ok().and_then(serde_json::Number::from_f64).map_or(Value::Null, Value::Number)
}

/// Leading comment block of every output file.
#[derive(Debug, Clone)]
pub struct Header {
    pub command: &'static str,
    pub config: Vec<(String, String)>,
    pub cutoffs: String,
    /// Extra `# key: value` lines after the standard ones.
    pub extra: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &'static str) -> Self {
        Header {
            command,
            config: Vec::new(),
            cutoffs: String::new(),
            extra: Vec::new(),
        }
    }

    pub fn config(mut self, key: &str, value: impl ToString) -> Self {
        self.config.push((key.to_string(), value.to_string()));
        self
    }

    pub fn extra(&mut self, key: &str, value: impl ToString) {
        self.extra.push((key.to_string(), value.to_string()));
    }

    pub fn comment_block(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# nlamp {}", env!("CARGO_PKG_VERSION")).unwrap();
        writeln!(s, "# command: {}", self.command).unwrap();
        let config: Vec<String> = self.config.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(s, "# config: {}", config.join(" ")).unwrap();
        writeln!(s, "# cutoffs: {}", self.cutoffs).unwrap();
        for (k, v) in &self.extra {
            writeln!(s, "# {k}: {v}").unwrap();
        }
        s
    }

    fn json(&self) -> Value {
        let mut config = Map::new();
        for (k, v) in &self.config {
            config.insert(k.clone(), Value::String(v.clone()));
        }
        let mut header = Map::new();
        header.insert("tool".into(), json!("nlamp"));
        header.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        header.insert("command".into(), json!(self.command));
        header.insert("config".into(), Value::Object(config));
        header.insert("cutoffs".into(), json!(self.cutoffs));
        for (k, v) in &self.extra {
            header.insert(k.clone(), json!(v));
        }
        Value::Object(header)
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, header: &Header, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = header.comment_block();
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    s.push_str(&cells.join(","));
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (c, v) in self.columns.iter().zip(row) {
                            obj.insert(c.to_string(), v.json());
                        }
                        Value::Object(obj)
                    })
                    .collect();
                json_document(header, "rows", Value::Array(rows))
            }
        }
    }
}

/// `{"header": ..., key: body}` pretty-printed with a trailing newline.
pub fn json_document(header: &Header, key: &str, body: Value) -> String {
    let mut doc = Map::new();
    doc.insert("header".into(), header.json());
    doc.insert(key.into(), body);
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.15000000000000002, "0.15"),
            (-0.375, "-0.375"),
            (3f64.sqrt(), "1.73205080757"),
            (1e-4, "0.0001"),
            (1.25e-5, "1.25e-05"),
            (123456789012.0, "123456789012"),
            (1234567890123.0, "1.23456789012e+12"),
            (6.25e-6, "6.25e-06"),
            (999999999999.7, "1e+12"),
            (f64::INFINITY, "inf"),
        ];
        for (x, s) in cases {
            assert_eq!(g12(x), s, "{x}");
        }
    }

    #[test]
    fn csv_cells_are_never_quoted() {
        assert_eq!(Cell::from("a, b").csv(), "a; b");
    }

    #[test]
    fn json_numbers_round_and_null() {
        assert_eq!(number(0.1 + 0.2), json!(0.3));
        assert_eq!(number(f64::NAN), Value::Null);
    }
}
