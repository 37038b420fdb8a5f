//! Many curves at once: one JSON line per input record plus a summary line.

use std::collections::BTreeMap;

use abelsurf_core::hecke::HeckeTable;
use rayon::prelude::*;
use serde::Serialize;

use crate::curves::RecordResult;
use crate::fetch::Fetcher;
use crate::pipeline::{run_curve, RunOptions};
use crate::report::{ErrorEntry, ErrorKind, Report};

/// A record that never became a curve.
#[derive(Debug, Clone, Serialize)]
pub struct ParseFailure {
    pub input_line: usize,
    pub possibly_nonsurjective: Option<Vec<u64>>,
    pub likely_nonsurjective: Option<Vec<u64>>,
    pub provenance: BTreeMap<u64, Vec<String>>,
    pub errors: Vec<ErrorEntry>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum BatchLine {
    Report(Box<Report>),
    ParseFailure(ParseFailure),
}

impl BatchLine {
    pub fn errors(&self) -> &[ErrorEntry] {
        match self {
            BatchLine::Report(r) => &r.errors,
            BatchLine::ParseFailure(p) => &p.errors,
        }
    }

    pub fn likely(&self) -> Option<&[u64]> {
        match self {
            BatchLine::Report(r) => r.likely_nonsurjective.as_deref(),
            BatchLine::ParseFailure(_) => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("batch line serializes")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PrimeCount {
    pub curves: u64,
    /// Of those, how many pass the point-count torsion test.
    pub torsion_compatible: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub curves: u64,
    pub completed: u64,
    pub failed: u64,
    pub errors_by_kind: BTreeMap<String, u64>,
    /// Number of likely nonsurjective primes -> number of curves.
    pub nonsurjective_count_histogram: BTreeMap<usize, u64>,
    /// Prime -> curves likely nonsurjective there.
    pub per_prime: BTreeMap<u64, PrimeCount>,
}

impl Summary {
    pub fn tally(lines: &[BatchLine]) -> Self {
        let mut s = Summary::default();
        for line in lines {
            s.curves += 1;
            if let Some(kind) = line.errors().iter().map(|e| e.kind).min() {
                s.failed += 1;
                *s.errors_by_kind.entry(format!("{kind:?}")).or_default() += 1;
                continue;
            }
            let Some(likely) = line.likely() else { continue };
            s.completed += 1;
            *s.nonsurjective_count_histogram.entry(likely.len()).or_default() += 1;
            let torsion: &[u64] = match line {
                BatchLine::Report(r) => &r.torsion_compatible,
                BatchLine::ParseFailure(_) => &[],
            };
            for &l in likely {
                let e = s.per_prime.entry(l).or_default();
                e.curves += 1;
                if torsion.contains(&l) {
                    e.torsion_compatible += 1;
                }
            }
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "summary": self }).to_string()
    }
}

/// Runs every record on a pool of `parallel` workers; output order matches input order.
pub fn run_batch(
    records: &[RecordResult],
    hecke: &HeckeTable,
    fetcher: Option<&Fetcher>,
    opts: &RunOptions,
    parallel: usize,
) -> Vec<BatchLine> {
    let one = |r: &RecordResult| match r {
        Ok(rec) => BatchLine::Report(Box::new(run_curve(rec, hecke, fetcher, opts))),
        Err(e) => BatchLine::ParseFailure(ParseFailure {
            input_line: e.line().unwrap_or(0),
            possibly_nonsurjective: None,
            likely_nonsurjective: None,
            provenance: BTreeMap::new(),
            errors: vec![ErrorEntry::new(ErrorKind::Parse, e.to_string())],
        }),
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(parallel.max(1)).build().expect("thread pool");
    // indexed parallel iterators collect in input order
    pool.install(|| records.par_iter().map(one).collect())
}
