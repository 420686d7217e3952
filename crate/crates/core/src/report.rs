//! Machine-readable reports and CSV export.

use std::collections::BTreeMap;
use std::io;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};
use serde_json::ser::Formatter;

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// One named check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// The mathematical statement the check certifies.
    pub anchor: String,
    pub pass: bool,
    /// Measured value; `None` when not finite.
    pub value: Option<f64>,
    pub tol: Option<f64>,
    pub witnesses: Vec<Vec<f64>>,
}

impl CheckRecord {
    pub fn new(name: &str, anchor: &str, pass: bool, value: f64, tol: f64) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            pass,
            value: finite(value),
            tol: finite(tol),
            witnesses: Vec::new(),
        }
    }

    pub fn with_witnesses(mut self, witnesses: Vec<Vec<f64>>) -> Self {
        self.witnesses = witnesses;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    /// Command-specific payloads (classification, components, ...).
    #[serde(default)]
    pub details: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value) -> Self {
        Self {
            version: VERSION.to_string(),
            command: command.to_string(),
            config,
            checks: Vec::new(),
            details: BTreeMap::new(),
            pass: true,
        }
    }

    pub fn push(&mut self, check: CheckRecord) {
        self.pass &= check.pass;
        self.checks.push(check);
    }

    pub fn detail(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.details.insert(key.to_string(), v);
    }

    pub fn failed(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Compact JSON with every float printed to 17 significant digits.
    pub fn to_json(&self) -> String {
        let mut out = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut out, SigDigits);
        self.serialize(&mut ser).expect("report serialises");
        out.push(b'\n');
        String::from_utf8(out).expect("utf-8")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Compact layout; floats as `d.dddddddddddddddde±x`.
struct SigDigits;

impl Formatter for SigDigits {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{}", sig17(value))
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// A float with 17 significant digits.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV of points, one per row, with a residual column when given.
pub fn points_csv(points: &[DVector<f64>], residuals: Option<&[f64]>, dim: usize) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let mut header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
    if residuals.is_some() {
        header.push("residual".into());
    }
    w.write_record(&header)?;
    for (k, x) in points.iter().enumerate() {
        let mut row: Vec<String> = x.iter().map(|v| sig17(*v)).collect();
        if let Some(r) = residuals {
            row.push(sig17(r[k]));
        }
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}

/// CSV from a header and rows of numbers.
pub fn table_csv(header: &[String], rows: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.iter().map(|v| sig17(*v)))?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8"))
}
