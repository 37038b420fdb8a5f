use abelsurf_core::arith::{power_roots, resultant};
use abelsurf_core::IntPolynomial;
use num_bigint::BigInt;
use proptest::prelude::*;

fn from_roots(roots: &[i64]) -> IntPolynomial {
    IntPolynomial::from_roots(&roots.iter().map(|&r| BigInt::from(r)).collect::<Vec<_>>())
}

fn roots_pow(roots: &[i64], k: u32) -> Vec<i64> {
    roots.iter().map(|r| r.pow(k)).collect()
}

proptest! {
    #[test]
    fn power_roots_composes(roots in prop::collection::vec(-6i64..=6, 1..5), a in 1u32..4, b in 1u32..4) {
        let p = from_roots(&roots);
        let ab = power_roots(&p, a * b).unwrap();
        prop_assert_eq!(&power_roots(&power_roots(&p, a).unwrap(), b).unwrap(), &ab);
        prop_assert_eq!(ab, from_roots(&roots_pow(&roots, a * b)));
    }

    #[test]
    fn power_roots_keeps_functional_equation(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), a in -8i64..=8, b in -20i64..=20, f in 1u32..6) {
        let pi = p as i64;
        let quartic = IntPolynomial::from_i64s(&[pi * pi, -pi * a, b, -a, 1]);
        let q = power_roots(&quartic, f).unwrap();
        let pf = BigInt::from(p).pow(f);
        prop_assert_eq!(q.degree(), Some(4));
        prop_assert_eq!(q.coeff(0), &pf * &pf);
        prop_assert_eq!(q.coeff(1), &pf * q.coeff(3));
    }

    #[test]
    fn resultant_vanishes_exactly_on_common_factors(
        a in prop::collection::vec(-4i64..=4, 2..5),
        b in prop::collection::vec(-4i64..=4, 2..5),
        shared in prop::option::of(prop::collection::vec(-3i64..=3, 2..3)),
    ) {
        let mut pa = IntPolynomial::from_i64s(&a);
        let mut pb = IntPolynomial::from_i64s(&b);
        prop_assume!(pa.degree().is_some_and(|d| d > 0) && pb.degree().is_some_and(|d| d > 0));
        if let Some(s) = shared {
            let s = IntPolynomial::from_i64s(&s);
            prop_assume!(s.degree() == Some(1));
            pa = &pa * &s;
            pb = &pb * &s;
        }
        let r = resultant(&pa, &pb).unwrap();
        let nonconstant_gcd = pa.gcd(&pb).degree().is_some_and(|d| d > 0);
        prop_assert_eq!(r == BigInt::from(0), nonconstant_gcd);
    }
}
