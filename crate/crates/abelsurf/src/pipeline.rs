//! Sieve followed by verification for one curve, packaged as a [`Report`].

use std::borrow::Cow;
use std::time::Instant;

use abelsurf_core::hecke::{required_levels, HeckeTable};
use abelsurf_core::sieve::{possibly_nonsurjective, EarlyExit, SieveConfig, DEFAULT_AUX_BOUND};
use abelsurf_core::verify::{likely_nonsurjective, VerifyOptions, DEFAULT_WITNESS_BOUND};
use abelsurf_core::{CurveModel, FrobeniusCache};

use crate::curves::CurveRecord;
use crate::fetch::{fill_table, Fetcher};
use crate::report::{witness_map, ErrorEntry, ErrorKind, Report, S6Summary, SieveSummary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    pub bound: u64,
    pub aux_bound: u64,
    pub early_exit: EarlyExit,
    pub verbose: bool,
    pub shortcut_1441: bool,
    /// Include wall-clock time; off for batch output, which must be reproducible.
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            bound: DEFAULT_WITNESS_BOUND,
            aux_bound: DEFAULT_AUX_BOUND,
            early_exit: EarlyExit::default(),
            verbose: false,
            shortcut_1441: false,
            timing: false,
        }
    }
}

/// `ℓ` with `ℓ | P_p(1)` for every good `p < bound`, `p ∤ ℓN`.
fn torsion_compatible(cache: &mut FrobeniusCache<'_>, candidates: &[u64], bound: u64) -> Vec<u64> {
    let curve = cache.curve();
    let aux = curve.auxiliary_primes(bound);
    let mut out = Vec::new();
    for &ell in candidates {
        let mut seen = false;
        let ok = aux.iter().filter(|&&p| p != ell).all(|&p| match cache.get(p) {
            Ok(fr) => {
                seen = true;
                let (p, a, b) = (fr.p as i128, fr.a as i128, fr.b as i128);
                (1 - a + b - p * a + p * p).rem_euclid(ell as i128) == 0
            }
            Err(_) => false,
        });
        if ok && seen {
            out.push(ell);
        }
    }
    out
}

/// Runs both stages. Errors are recorded in the report, never raised.
pub fn run_curve(rec: &CurveRecord, hecke: &HeckeTable, fetcher: Option<&Fetcher>, opts: &RunOptions) -> Report {
    let start = Instant::now();
    let mut report = Report::empty(rec.clone(), opts.bound, opts.aux_bound);
    let finish = |mut r: Report| {
        if opts.timing {
            r.timing_ms = Some(start.elapsed().as_millis() as u64);
        }
        r
    };
    let curve: CurveModel = match rec.model() {
        Ok(c) => c,
        Err(e) => {
            report.errors.push(ErrorEntry::new(ErrorKind::Parse, e.to_string()));
            return finish(report);
        }
    };

    let mut table = Cow::Borrowed(hecke);
    if let Some(fetcher) = fetcher {
        let missing: Vec<u64> = required_levels(curve.conductor()).into_iter().collect();
        let aux = curve.auxiliary_primes(opts.aux_bound);
        if let Err(e) = fill_table(fetcher, table.to_mut(), &missing, &aux) {
            report.errors.push(ErrorEntry::new(ErrorKind::Fetch, e.to_string()));
            return finish(report);
        }
    }

    let mut cache = FrobeniusCache::new(&curve);
    let config = SieveConfig { aux_bound: opts.aux_bound, early_exit: opts.early_exit };
    let sieve = match possibly_nonsurjective(&mut cache, &table, &config) {
        Ok(s) => s,
        Err(e) => {
            report.errors.push(ErrorEntry::from_sieve(&e));
            return finish(report);
        }
    };
    report.possibly_nonsurjective = Some(sieve.possibly_nonsurjective.iter().copied().collect());
    report.provenance =
        sieve.provenance.iter().map(|(p, rs)| (*p, rs.iter().map(|r| r.to_string()).collect())).collect();
    report.sieve = Some(SieveSummary::new(&sieve));

    let options = VerifyOptions { shortcut_1441: opts.shortcut_1441 };
    let verified = match likely_nonsurjective(&mut cache, &sieve, opts.bound, options) {
        Ok(v) => v,
        Err(e) => {
            report.errors.push(ErrorEntry::new(ErrorKind::Internal, e.to_string()));
            return finish(report);
        }
    };
    let likely: Vec<u64> = verified.likely_nonsurjective.iter().copied().collect();
    report.torsion_compatible = torsion_compatible(&mut cache, &likely, opts.bound);
    report.likely_nonsurjective = Some(likely);
    report.galois_s6 = verified.s6.as_ref().map(S6Summary::new);
    report.largest_witness = verified.largest_witness;
    if opts.verbose {
        report.witnesses = Some(witness_map(&verified));
    }
    finish(report)
}
