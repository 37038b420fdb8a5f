//! The Hecke table CSV format.
//!
//! ```text
//! level,prime,polynomial
//! 23,2,z^2+z-1
//! ```
//!
//! The header line is optional on input; blank lines and lines starting
//! with `#` are skipped. The writer emits the header and sorts by
//! `(level, prime)`.

use std::fmt::Write as _;
use std::path::Path;

use abelsurf_core::hecke::{HeckeError, HeckeTable};

use crate::polytext::{format_poly, parse_poly, PolyParseError};

pub const HEADER: &str = "level,prime,polynomial";

#[derive(Debug, thiserror::Error)]
pub enum HeckeFileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected 3 comma-separated fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: bad {field} {text:?}")]
    BadInteger { line: usize, field: &'static str, text: String },
    #[error("line {line}: {source}")]
    Poly { line: usize, source: PolyParseError },
    #[error("line {line}: {source}")]
    Invalid { line: usize, source: HeckeError },
}

impl HeckeFileError {
    /// 1-based line of the offending record, if the error is tied to one.
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Io { .. } => None,
            Self::FieldCount { line, .. }
            | Self::BadInteger { line, .. }
            | Self::Poly { line, .. }
            | Self::Invalid { line, .. } => Some(*line),
        }
    }
}

pub fn parse_hecke(text: &str, source: &str) -> Result<HeckeTable, HeckeFileError> {
    let mut table = HeckeTable::new(source);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') || (line == 1 && l == HEADER) {
            continue;
        }
        let fields: Vec<&str> = l.split(',').collect();
        if fields.len() != 3 {
            return Err(HeckeFileError::FieldCount { line, found: fields.len() });
        }
        let int = |field: &'static str, t: &str| {
            t.trim().parse::<u64>().map_err(|_| HeckeFileError::BadInteger { line, field, text: t.to_string() })
        };
        let level = int("level", fields[0])?;
        let prime = int("prime", fields[1])?;
        let poly = parse_poly(fields[2]).map_err(|source| HeckeFileError::Poly { line, source })?;
        table.insert(level, prime, poly).map_err(|source| HeckeFileError::Invalid { line, source })?;
    }
    Ok(table)
}

pub fn format_hecke(table: &HeckeTable) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (d, p, h) in table.iter() {
        writeln!(out, "{d},{p},{}", format_poly(h)).unwrap();
    }
    out
}

pub fn load_hecke(path: &Path) -> Result<HeckeTable, HeckeFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| HeckeFileError::Io { path: path.display().to_string(), source })?;
    parse_hecke(&text, &path.display().to_string())
}

pub fn save_hecke(table: &HeckeTable, path: &Path) -> Result<(), HeckeFileError> {
    std::fs::write(path, format_hecke(table))
        .map_err(|source| HeckeFileError::Io { path: path.display().to_string(), source })
}
