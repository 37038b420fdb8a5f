use abelsurf::bundled_hecke;
use abelsurf::hecke_file::{format_hecke, parse_hecke, HeckeFileError};
use abelsurf_core::hecke::{required_levels, HeckeTable};
use abelsurf_core::IntPolynomial;
use proptest::prelude::*;

fn from_roots(roots: &[i64]) -> IntPolynomial {
    roots.iter().fold(IntPolynomial::one(), |acc, &r| &acc * &IntPolynomial::from_i64s(&[-r, 1]))
}

/// Products of `z - a` with `|a| <= 2 sqrt p`, which always satisfy the Ramanujan bound.
/// The degree depends only on the level, as it must within one table.
fn entry() -> impl Strategy<Value = (u64, u64, Vec<i64>)> {
    (prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 97]), 26u64..500).prop_flat_map(|(p, d)| {
        let r = (2.0 * (p as f64).sqrt()).floor() as i64;
        (Just(d), Just(p), prop::collection::vec(-r..=r, (d % 5 + 1) as usize))
    })
}

proptest! {
    #[test]
    fn format_then_parse_round_trips(entries in prop::collection::vec(entry(), 0..20)) {
        let mut t = HeckeTable::new("gen");
        for (d, p, roots) in &entries {
            if d % p != 0 && t.get(*d, *p).is_none() {
                t.insert(*d, *p, from_roots(roots)).unwrap();
            }
        }
        let text = format_hecke(&t);
        let back = parse_hecke(&text, "gen").unwrap();
        prop_assert_eq!(back.len(), t.len());
        for (d, p, h) in t.iter() {
            prop_assert_eq!(back.get(d, p), Some(h));
        }
        prop_assert_eq!(format_hecke(&back), text);
    }
}

#[test]
fn bundled_table_matches_known_values() {
    let t = bundled_hecke();
    assert_eq!(t.get(23, 5), Some(&IntPolynomial::from_i64s(&[-4, 2, 1])));
    assert_eq!(t.get(31, 2), Some(&IntPolynomial::from_i64s(&[-1, -1, 1])));
    assert_eq!(t.dimension(217), Some(15));
    // every level some fixture curve needs is present
    for n in [47089u64, 529, 15876, 976] {
        for d in required_levels(n) {
            assert!(t.dimension(d).is_some(), "level {d} for conductor {n}");
        }
    }
}

#[test]
fn rejects_values_off_the_ramanujan_interval() {
    // z - 3 at p = 2: |3| > 2 sqrt 2
    let e = parse_hecke("23,2,z-3\n", "mem").unwrap_err();
    assert_eq!(e.line(), Some(1));
    assert!(matches!(parse_hecke("level,prime,polynomial\n23,2\n", "mem"), Err(HeckeFileError::FieldCount { line: 2, .. })));
}
