//! Observation batches and the plain-text / CSV sample formats.
//!
//! Plain text holds one nonnegative decimal per line (blank lines and lines
//! starting with `#` are skipped). CSV input needs a header row; the value
//! column is selected by name.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::Law;
use crate::error::{invalid, Error, Result};

/// Nonempty list of nonnegative, finite observations plus a provenance label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    values: Vec<f64>,
    label: String,
}

impl SampleBatch {
    pub fn new(values: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyData);
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(invalid(format!(
                "observation {i} = {v} is not a finite nonnegative value"
            )));
        }
        Ok(Self {
            values,
            label: label.into(),
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance (zero for a single observation).
    pub fn variance(&self) -> f64 {
        let n = self.values.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64
    }

    /// Fails unless every observation is strictly positive.
    pub fn require_positive(&self) -> Result<()> {
        match self.values.iter().position(|&v| v <= 0.0) {
            Some(i) => Err(Error::Domain(format!(
                "observation {i} = {} must be strictly positive",
                self.values[i]
            ))),
            None => Ok(()),
        }
    }
}

/// `count` independent draws from `law`.
pub fn sample<L: Law, R: Rng + ?Sized>(law: &L, count: usize, rng: &mut R) -> Result<SampleBatch> {
    if count == 0 {
        return Err(invalid("sample count must be >= 1"));
    }
    let values = (0..count).map(|_| law.draw(rng)).collect();
    SampleBatch::new(values, "synthetic")
}

pub fn parse_plain<R: BufRead>(reader: R, label: &str) -> Result<SampleBatch> {
    let mut values = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let v: f64 = s
            .parse()
            .map_err(|_| Error::Parse(format!("{label}:{}: `{s}` is not a number", lineno + 1)))?;
        values.push(v);
    }
    SampleBatch::new(values, label)
}

pub fn parse_csv<R: Read>(reader: R, column: &str, label: &str) -> Result<SampleBatch> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let idx = headers
        .iter()
        .position(|h| h.trim() == column)
        .ok_or_else(|| Error::Parse(format!("{label}: no column named `{column}`")))?;
    let mut values = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let cell = rec.get(idx).unwrap_or("").trim();
        let v: f64 = cell.parse().map_err(|_| {
            Error::Parse(format!(
                "{label}: row {}: `{cell}` is not a number",
                row + 2
            ))
        })?;
        values.push(v);
    }
    SampleBatch::new(values, format!("{label}#{column}"))
}

/// Reads a sample file: CSV when `column` is given, plain text otherwise.
pub fn read_samples(path: &Path, column: Option<&str>) -> Result<SampleBatch> {
    let label = path.display().to_string();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{label}: {e}")))?;
    match column {
        Some(col) => parse_csv(file, col, &label),
        None => parse_plain(std::io::BufReader::new(file), &label),
    }
}

/// Writes one value per line using the shortest round-trip representation.
pub fn write_plain<W: Write>(mut out: W, batch: &SampleBatch) -> Result<()> {
    for v in batch.values() {
        writeln!(out, "{v}")?;
    }
    Ok(())
}
