//! One PASS/FAIL line per acceptance criterion.
//!
//! Criteria listed in `KNOWN_FAILING` are still evaluated and printed as FAIL;
//! they only stop the process from exiting nonzero. See the README for why each
//! is there. Any other failure, or a known failure that starts passing, makes
//! the target fail.

mod common;
#[path = "../../core/tests/common/mod.rs"]
mod naive;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use abelsurf::bundled_hecke;
use abelsurf::curves::CurveRecord;
use abelsurf::oracle_driver::{c_set_checks, enumerate_f3_checks};
use abelsurf::pipeline::{run_curve, RunOptions};
use abelsurf::report::{ErrorKind, Report};
use abelsurf_core::arith::primes_below;
use abelsurf_core::hecke::HeckeTable;
use abelsurf_core::verify::grh_bound;
use common::fixture;

const KNOWN_FAILING: &[&str] = &["8b"];

struct Outcome {
    id: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

fn check(id: &'static str, f: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f();
    Outcome { id, passed, detail, elapsed: start.elapsed() }
}

fn run(rec: &CurveRecord, table: &HeckeTable, bound: u64) -> Report {
    let opts = RunOptions { bound, ..RunOptions::default() };
    run_curve(rec, table, None, &opts)
}

fn set(v: &Option<Vec<u64>>) -> Option<BTreeSet<u64>> {
    v.as_ref().map(|v| v.iter().copied().collect())
}

fn worked_example() -> (bool, String) {
    let rec = fixture("249.a");
    let empty = HeckeTable::new("none");
    let start = Instant::now();
    let full = run(&rec, &empty, 1000);
    let small = run(&rec, &empty, 100);
    let secs = start.elapsed().as_secs_f64();
    let sieve = set(&full.possibly_nonsurjective);
    let likely = set(&small.likely_nonsurjective);
    let ok = sieve == Some(BTreeSet::from([2, 3, 5, 7, 83]))
        && likely.as_ref().is_some_and(|l| !l.contains(&83) && l.is_subset(&BTreeSet::from([2, 3, 5, 7])))
        && secs < 30.0;
    (ok, format!("sieve {sieve:?}, likely(B=100) {likely:?}, {secs:.1}s, no Hecke data"))
}

fn showcase() -> (bool, String) {
    let r = run(&fixture("47089.a"), &bundled_hecke(), 1000);
    let related = r.provenance.get(&31).is_some_and(|v| v.iter().any(|s| s == "related_subquotients"));
    let likely = set(&r.likely_nonsurjective);
    let ok = related && likely == Some(BTreeSet::from([2, 31]));
    (ok, format!("31 from alg_related: {related}, likely {likely:?}"))
}

fn grh() -> (bool, String) {
    let b = grh_bound(7, 249) as f64;
    ((3.574e23..=3.582e23).contains(&b), format!("{b:.4e}"))
}

fn enumeration() -> (bool, String) {
    let checks = enumerate_f3_checks(8);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let shown: Vec<String> = checks.iter().map(|c| format!("{}={}", c.name.trim_start_matches("gsp4_f3_"), c.observed)).collect();
    (failed.is_empty() && checks.len() == 5, shown.join(" "))
}

fn c_sets() -> (bool, String) {
    let checks = c_set_checks(29);
    let wanted = [
        ("G1920", &[3u64, 5, 11, 13, 19, 29][..]),
        ("G720", &[5, 17, 29][..]),
        ("G5040", &[7][..]),
    ];
    let mut missing = Vec::new();
    for (kind, ells) in wanted {
        for ell in ells {
            for what in ["order", "pairs"] {
                let name = format!("{kind}_at_{ell}_{what}");
                if !checks.iter().any(|c| c.name == name && c.passed) {
                    missing.push(name);
                }
            }
        }
    }
    let all_pass = checks.iter().all(|c| c.passed);
    (missing.is_empty() && all_pass, format!("{} checks, failing or absent: {missing:?}", checks.len()))
}

fn frobenius() -> (bool, String) {
    let mut compared = 0;
    for (i, &(label, f, h, _)) in naive::CURVES.iter().enumerate().take(5) {
        let c = naive::curve(i);
        for p in primes_below(51).into_iter().filter(|&p| c.is_good_prime(p)) {
            let n1 = naive::naive_count(f, h, p, 1);
            let n2 = naive::naive_count(f, h, p, 2);
            let fr = c.frobenius_poly(p).unwrap();
            let ok = fr.a * fr.a <= 16 * p as i64
                && fr.count_over(1) == n1 as i64
                && fr.count_over(2) == n2 as i64
                && c.count_points(p, 2).unwrap() == n2;
            if !ok {
                return (false, format!("{label} p={p}"));
            }
            compared += 1;
        }
    }
    (true, format!("{compared} (curve, p) pairs against full enumeration over F_p and F_p^2"))
}

fn endomorphisms() -> (bool, String) {
    let table = bundled_hecke();
    let mut ok = true;
    let mut seen = Vec::new();
    for (label, site) in [("169.a", "alg_related"), ("3125.a", "alg_quad(kronecker(5))"), ("529.a", "alg_selfdual(level 23)")] {
        let r = run(&fixture(label), &table, 1000);
        let sites: Vec<String> =
            r.errors.iter().filter(|e| e.kind == ErrorKind::EndomorphismSuspected).flat_map(|e| e.sites.clone()).collect();
        ok &= sites == [site];
        seen.push(format!("{label}: {sites:?}"));
    }
    (ok, seen.join(", "))
}

fn dataset() -> Vec<Report> {
    let table = bundled_hecke();
    ["1923.a", "976.a", "743.a", "15876.a"].iter().map(|l| run(&fixture(l), &table, 1000)).collect()
}

fn dataset_sets(reports: &[Report]) -> (bool, String) {
    let expected: [&[u64]; 4] = [&[5], &[2, 29], &[], &[2, 3, 5]];
    let mut ok = true;
    let mut seen = Vec::new();
    for (r, e) in reports.iter().zip(expected) {
        let got = set(&r.likely_nonsurjective);
        ok &= got == Some(e.iter().copied().collect());
        seen.push(format!("{} {got:?}", r.curve.label));
    }
    (ok, seen.join(", "))
}

fn dataset_witness(reports: &[Report]) -> (bool, String) {
    let per: Vec<String> =
        reports.iter().map(|r| format!("{}: {:?}", r.curve.label, r.largest_witness)).collect();
    let max = reports.iter().filter_map(|r| r.largest_witness).max();
    (max.is_some_and(|m| m <= 89), format!("largest {max:?} (bound 89); {}", per.join(", ")))
}

fn main() {
    let mut outcomes = vec![
        check("1", worked_example),
        check("2", showcase),
        check("3", grh),
        check("4", enumeration),
        check("5", c_sets),
        check("6", frobenius),
        check("7", endomorphisms),
    ];
    let start = Instant::now();
    let reports = dataset();
    let shared = start.elapsed();
    let mut sets = check("8a", || dataset_sets(&reports));
    sets.elapsed += shared;
    outcomes.push(sets);
    outcomes.push(check("8b", || dataset_witness(&reports)));

    let mut unexpected = 0;
    for o in &outcomes {
        let known = KNOWN_FAILING.contains(&o.id);
        let tag = match (o.passed, known) {
            (true, false) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "FAIL (known)",
            (true, true) => "PASS (listed as known failure)",
        };
        if o.passed == known {
            unexpected += 1;
        }
        println!("criterion {:<3} {tag:<13} {:>7.2}s  {}", o.id, o.elapsed.as_secs_f64(), o.detail);
    }
    if unexpected > 0 {
        eprintln!("{unexpected} criteria differ from the expected outcome");
        std::process::exit(1);
    }
}
