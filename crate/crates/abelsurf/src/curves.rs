//! Curve records: `label,f,h,conductor` with semicolon-separated ascending
//! coefficient lists.
//!
//! ```text
//! label,f,h,conductor
//! 249.a.249.1,0;1;1,1;0;0;1,249
//! ```
//!
//! An empty `h` cell means `h = 0`. The header line is optional; lines
//! starting with `#` are skipped.

use std::path::Path;

use abelsurf_core::frobenius::CurveError;
use abelsurf_core::{CurveModel, IntPolynomial};
use num_bigint::BigInt;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveRecord {
    pub label: String,
    /// Ascending coefficients; decimal strings so large values survive JSON.
    #[serde(serialize_with = "as_strings")]
    pub f: Vec<BigInt>,
    #[serde(serialize_with = "as_strings")]
    pub h: Vec<BigInt>,
    pub conductor: u64,
}

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

#[derive(Debug, thiserror::Error)]
pub enum CurveFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {source}")]
    Csv { line: usize, source: csv::Error },
    #[error("line {line}: expected 4 fields (label,f,h,conductor), found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: bad coefficient {text:?} in {field}")]
    Coefficient { line: usize, field: &'static str, text: String },
    #[error("line {line}: bad conductor {text:?}")]
    Conductor { line: usize, text: String },
    #[error("line {line}: {source}")]
    Model { line: usize, source: CurveError },
}

impl CurveFileError {
    pub fn line(&self) -> Option<usize> {
        match self {
            CurveFileError::Io { .. } => None,
            CurveFileError::Csv { line, .. }
            | CurveFileError::FieldCount { line, .. }
            | CurveFileError::Coefficient { line, .. }
            | CurveFileError::Conductor { line, .. }
            | CurveFileError::Model { line, .. } => Some(*line),
        }
    }
}

pub fn parse_coefficients(cell: &str) -> Result<Vec<BigInt>, String> {
    let cell = cell.trim();
    let cell = cell.strip_prefix('[').and_then(|c| c.strip_suffix(']')).unwrap_or(cell);
    if cell.trim().is_empty() {
        return Ok(Vec::new());
    }
    cell.split(';').map(|t| t.trim().parse::<BigInt>().map_err(|_| t.trim().to_string())).collect()
}

impl CurveRecord {
    pub fn new(label: impl Into<String>, f: &[i64], h: &[i64], conductor: u64) -> Self {
        Self {
            label: label.into(),
            f: f.iter().map(|&c| BigInt::from(c)).collect(),
            h: h.iter().map(|&c| BigInt::from(c)).collect(),
            conductor,
        }
    }

    /// Parses the four cells of one record; `line` is only used in errors.
    pub fn from_fields(fields: &[&str], line: usize) -> Result<Self, CurveFileError> {
        if fields.len() != 4 {
            return Err(CurveFileError::FieldCount { line, found: fields.len() });
        }
        let f = parse_coefficients(fields[1])
            .map_err(|text| CurveFileError::Coefficient { line, field: "f", text })?;
        let h = parse_coefficients(fields[2])
            .map_err(|text| CurveFileError::Coefficient { line, field: "h", text })?;
        let conductor = fields[3]
            .trim()
            .parse::<u64>()
            .map_err(|_| CurveFileError::Conductor { line, text: fields[3].to_string() })?;
        let rec = Self { label: fields[0].trim().to_string(), f, h, conductor };
        rec.model().map_err(|source| CurveFileError::Model { line, source })?;
        Ok(rec)
    }

    pub fn model(&self) -> Result<CurveModel, CurveError> {
        CurveModel::new(
            IntPolynomial::new(self.f.clone()),
            IntPolynomial::new(self.h.clone()),
            self.conductor,
            Some(self.label.clone()),
        )
    }

    pub fn to_csv_line(&self) -> String {
        let join = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(";");
        format!("{},{},{},{}", self.label, join(&self.f), join(&self.h), self.conductor)
    }
}

/// One record or the error that replaced it, in input order.
pub type RecordResult = Result<CurveRecord, CurveFileError>;

/// Parses every record, keeping going past bad lines.
pub fn parse_curves(text: &str) -> Vec<RecordResult> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for row in reader.records() {
        let row = match row {
            Ok(r) => r,
            Err(source) => {
                let line = source.position().map_or(0, |p| p.line() as usize);
                out.push(Err(CurveFileError::Csv { line, source }));
                continue;
            }
        };
        let line = row.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<&str> = row.iter().collect();
        if fields.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if out.is_empty() && fields.first().is_some_and(|f| f.trim() == "label") {
            continue;
        }
        out.push(CurveRecord::from_fields(&fields, line));
    }
    out
}

pub fn load_curves(path: &Path) -> Result<Vec<RecordResult>, CurveFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CurveFileError::Io { path: path.display().to_string(), source })?;
    Ok(parse_curves(&text))
}
