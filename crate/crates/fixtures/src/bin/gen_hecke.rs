//! Writes the Hecke table needed by every curve in a curve CSV.
//!
//! Usage: gen_hecke CURVES.csv OUT.csv [PRIME_BOUND]

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use abelsurf::curves::load_curves;
use abelsurf::hecke_file::save_hecke;
use abelsurf_core::arith::primes_below;
use abelsurf_core::hecke::{required_levels, HeckeTable};
use abelsurf_fixtures::modsym::NewformOracle;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let bound: u64 = args.get(3).map_or(1000, |s| s.parse().unwrap());
    let records = load_curves(Path::new(&args[1])).unwrap();
    let mut levels = BTreeSet::new();
    for r in records {
        levels.extend(required_levels(r.unwrap().conductor));
    }
    let mut table = HeckeTable::new("modular symbols");
    let mut oracle = NewformOracle::new();
    for &d in &levels {
        let t = Instant::now();
        for p in primes_below(bound) {
            if d % p != 0 {
                table.insert(d, p, oracle.new_charpoly(d, p).unwrap()).unwrap();
            }
        }
        eprintln!("level {d}: dimension {:?}, {:?}", table.dimension(d), t.elapsed());
    }
    save_hecke(&table, Path::new(&args[2])).unwrap();
}
