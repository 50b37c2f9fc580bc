//! Output records and their CSV/JSON encodings.

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeMap, Serializer};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    /// 12 significant digits for reals; `NaN`, `inf`, `-inf` for the rest.
    pub fn to_text(self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(x) if x.is_nan() => "NaN".into(),
            Cell::Real(x) if x.is_infinite() => if x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Real(x) => format!("{x:.11e}"),
        }
    }

    #[cfg(test)]
    pub fn parse(s: &str) -> Option<Cell> {
        match s {
            "NaN" => Some(Cell::Real(f64::NAN)),
            "inf" => Some(Cell::Real(f64::INFINITY)),
            "-inf" => Some(Cell::Real(f64::NEG_INFINITY)),
            _ if s.contains(['e', '.']) => s.parse().ok().map(Cell::Real),
            _ => s.parse().ok().map(Cell::Int),
        }
    }

    fn rounded(self) -> serde_json::Value {
        match self {
            Cell::Int(i) => i.into(),
            Cell::Real(x) if x.is_finite() => {
                let r: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
                serde_json::Number::from_f64(r).map_or(serde_json::Value::Null, serde_json::Value::Number)
            }
            Cell::Real(_) => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Real(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

/// Key/value pairs kept in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Pairs(pub Vec<(String, String)>);

impl Pairs {
    pub fn push(&mut self, k: &str, v: impl ToString) {
        self.0.push((k.to_string(), v.to_string()));
    }
}

impl Serialize for Pairs {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: Pairs,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Pairs,
}

impl OutputRecord {
    pub fn new(command: &str, columns: Vec<&'static str>) -> Self {
        Self { command: command.into(), parameters: Pairs::default(), columns, rows: Vec::new(), diagnostics: Pairs::default() }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Header row plus data rows, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_text()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }
}

struct Row<'a>(&'a [&'static str], &'a [Cell]);

impl Serialize for Row<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            m.serialize_entry(k, &v.rounded())?;
        }
        m.end()
    }
}

impl Serialize for OutputRecord {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Row<'_>> = self.rows.iter().map(|r| Row(&self.columns, r)).collect();
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("schema_version", &SCHEMA_VERSION)?;
        m.serialize_entry("command", &self.command)?;
        m.serialize_entry("parameters", &self.parameters)?;
        m.serialize_entry("rows", &rows)?;
        m.serialize_entry("diagnostics", &self.diagnostics)?;
        m.end()
    }
}

/// Header and cells of a CSV emitted by [`OutputRecord::to_csv`].
#[cfg(test)]
pub fn parse_csv(text: &str) -> Option<(Vec<String>, Vec<Vec<Cell>>)> {
    let mut lines = text.lines();
    let header = lines.next()?.split(',').map(str::to_string).collect::<Vec<_>>();
    let rows = lines
        .map(|l| l.split(',').map(Cell::parse).collect::<Option<Vec<_>>>())
        .collect::<Option<Vec<_>>>()?;
    Some((header, rows))
}
