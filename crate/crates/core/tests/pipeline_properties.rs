mod common;

use std::collections::BTreeSet;

use abelsurf_core::hecke::HeckeTable;
use abelsurf_core::sieve::{alg_odd, alg_related, possibly_nonsurjective, EarlyExit, SieveConfig};
use abelsurf_core::verify::{likely_nonsurjective, run_test, AutoReason, Flag, VerifyOptions, Witness, EXCEPTIONAL_CUTOFF};
use abelsurf_core::{CurveModel, FrobeniusCache, IntPolynomial};
use proptest::prelude::*;

fn model(f: &[i64], h: &[i64], n: u64) -> CurveModel {
    CurveModel::new(IntPolynomial::from_i64s(f), IntPolynomial::from_i64s(h), n, None).unwrap()
}

/// Curves whose sieve needs no Hecke data.
fn offline_curves() -> Vec<CurveModel> {
    vec![
        common::curve(0),
        common::curve(3),
        common::curve(4),
        model(&[0, -1, 1, -2, 1, -1], &[1, 0, 1], 464),
    ]
}

fn sieve(c: &CurveModel, aux_bound: u64, early_exit: EarlyExit) -> BTreeSet<u64> {
    let mut cache = FrobeniusCache::new(c);
    let cfg = SieveConfig { aux_bound, early_exit };
    possibly_nonsurjective(&mut cache, &HeckeTable::new("empty"), &cfg).unwrap().possibly_nonsurjective
}

#[test]
fn more_auxiliary_primes_never_add_candidates() {
    for c in offline_curves() {
        let mut prev: Option<BTreeSet<u64>> = None;
        for bound in [60, 150, 400, 1000] {
            let s = sieve(&c, bound, EarlyExit::Never);
            if let Some(p) = &prev {
                assert!(s.is_subset(p), "N={} bound {bound}: {s:?} not in {p:?}", c.conductor());
            }
            prev = Some(s);
        }
    }
}

#[test]
fn early_exit_agrees_with_full_run_on_fixtures() {
    for c in offline_curves() {
        assert_eq!(sieve(&c, 1000, EarlyExit::default()), sieve(&c, 1000, EarlyExit::Never), "N={}", c.conductor());
    }
}

#[test]
fn known_nonsurjective_primes_survive() {
    // 29-torsion on the 976 curve; 2 at 464
    let c = offline_curves();
    assert!(sieve(&c[2], 1000, EarlyExit::default()).is_superset(&[2, 29].into()));
    assert!(sieve(&c[3], 1000, EarlyExit::default()).contains(&2));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn gcds_ignore_prime_order(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let c = common::curve(0);
        let mut cache = FrobeniusCache::new(&c);
        let aux = c.auxiliary_primes(300);
        let (odd, _) = alg_odd(&mut cache, &aux, EarlyExit::Never).unwrap();
        let (rel, _) = alg_related(&mut cache, &aux, EarlyExit::Never).unwrap();
        let mut shuffled = aux.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(alg_odd(&mut cache, &shuffled, EarlyExit::Never).unwrap().0, odd);
        prop_assert_eq!(alg_related(&mut cache, &shuffled, EarlyExit::Never).unwrap().0, rel);
    }
}

#[test]
fn larger_witness_bound_only_shrinks_output() {
    for c in offline_curves() {
        let mut cache = FrobeniusCache::new(&c);
        let s = possibly_nonsurjective(&mut cache, &HeckeTable::new("empty"), &SieveConfig::default()).unwrap();
        let mut prev: Option<BTreeSet<u64>> = None;
        for b in [20, 50, 100, 300, 1000] {
            let v = likely_nonsurjective(&mut cache, &s, b, VerifyOptions::default()).unwrap();
            assert!(v.likely_nonsurjective.is_subset(&s.possibly_nonsurjective));
            if let Some(p) = &prev {
                assert!(v.likely_nonsurjective.is_subset(p), "N={} B={b}", c.conductor());
            }
            prev = Some(v.likely_nonsurjective);
        }
    }
}

#[test]
fn witnesses_replay_and_auto_passes_are_congruence_classes() {
    for c in offline_curves() {
        for shortcut in [false, true] {
            let mut cache = FrobeniusCache::new(&c);
            let s = possibly_nonsurjective(&mut cache, &HeckeTable::new("empty"), &SieveConfig::default()).unwrap();
            let v = likely_nonsurjective(&mut cache, &s, 1000, VerifyOptions { shortcut_1441: shortcut }).unwrap();
            for (&ell, st) in &v.states {
                let removed = !v.likely_nonsurjective.contains(&ell);
                assert_eq!(removed, Flag::ALL.iter().all(|f| st.witnesses.contains_key(f)));
                for (&flag, &w) in &st.witnesses {
                    match w {
                        Witness::Prime(p) => {
                            assert!(p < 1000 && c.is_good_prime(p));
                            let fr = cache.get(p).unwrap();
                            assert!(run_test(&fr, ell, flag).unwrap().passed(), "ell={ell} {flag:?} p={p}");
                        }
                        Witness::Auto(AutoReason::EllPlusMinusOneMod8) => {
                            assert!(flag == Flag::Exc1920 && (ell % 8 == 1 || ell % 8 == 7))
                        }
                        Witness::Auto(AutoReason::EllPlusMinusOneMod12) => {
                            assert!(flag == Flag::Exc720 && (ell % 12 == 1 || ell % 12 == 11))
                        }
                        Witness::Auto(AutoReason::EllNotSeven) => assert!(flag == Flag::Exc5040 && ell != 7),
                        Witness::Auto(AutoReason::AboveExceptionalCutoff) => {
                            assert!(shortcut && ell > EXCEPTIONAL_CUTOFF)
                        }
                    }
                }
            }
            if v.largest_witness.is_some() {
                let max = v
                    .states
                    .values()
                    .flat_map(|st| st.witnesses.values())
                    .filter_map(|w| if let Witness::Prime(p) = w { Some(*p) } else { None })
                    .max();
                assert_eq!(v.largest_witness, max);
            }
        }
    }
}

#[test]
fn shortcut_does_not_change_output() {
    for c in offline_curves() {
        let mut cache = FrobeniusCache::new(&c);
        let s = possibly_nonsurjective(&mut cache, &HeckeTable::new("empty"), &SieveConfig::default()).unwrap();
        let a = likely_nonsurjective(&mut cache, &s, 1000, VerifyOptions { shortcut_1441: false }).unwrap();
        let b = likely_nonsurjective(&mut cache, &s, 1000, VerifyOptions { shortcut_1441: true }).unwrap();
        assert_eq!(a.likely_nonsurjective, b.likely_nonsurjective);
    }
}
