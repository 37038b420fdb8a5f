//! Pruning of the sieve output with Frobenius witnesses, the sextic Galois
//! test at ℓ = 2 and the explicit witness bound under GRH.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::arith::{inv_mod, is_prime_u64, primes_below, radical, IntPolynomial};
use crate::fp::{legendre, FpPoly};
use crate::frobenius::{CurveError, FrobeniusCache, FrobeniusPoly};
use crate::sieve::SieveReport;

pub const DEFAULT_WITNESS_BOUND: u64 = 1000;

/// Above this, no exceptional subgroup can be the image.
pub const EXCEPTIONAL_CUTOFF: u64 = 1441;

pub const C_1920: [(i64, i64); 12] =
    [(0, -2), (0, -1), (0, 0), (0, 1), (0, 2), (1, 1), (2, 1), (2, 2), (4, 2), (4, 3), (8, 4), (16, 6)];
pub const C_720: [(i64, i64); 9] = [(0, 1), (0, 0), (4, 3), (1, 1), (16, 6), (0, 2), (1, 0), (3, 2), (0, -2)];
/// Only meaningful modulo 7.
pub const C_7_5040: [(i64, i64); 12] =
    [(0, 0), (0, 1), (0, 2), (0, 5), (0, 6), (1, 0), (1, 1), (2, 6), (3, 2), (4, 3), (5, 3), (6, 3)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("the tests are only defined for odd ℓ")]
    EvenEll,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("ℓ = {ell} divides p = {p}")]
    EllDividesP { ell: u64, p: u64 },
    #[error("4f + h^2 is not squarefree")]
    NotSquarefree,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Exceptional {
    G1920,
    G720,
    G5040,
}

impl Exceptional {
    pub fn pairs(self) -> &'static [(i64, i64)] {
        match self {
            Exceptional::G1920 => &C_1920,
            Exceptional::G720 => &C_720,
            Exceptional::G5040 => &C_7_5040,
        }
    }

    /// Congruence conditions on ℓ under which the subgroup cannot occur at all.
    pub fn excluded_for(self, ell: u64) -> bool {
        match self {
            Exceptional::G1920 => ell % 8 == 1 || ell % 8 == 7,
            Exceptional::G720 => ell % 12 == 1 || ell % 12 == 11,
            Exceptional::G5040 => ell != 7,
        }
    }

    fn auto_reason(self) -> AutoReason {
        match self {
            Exceptional::G1920 => AutoReason::EllPlusMinusOneMod8,
            Exceptional::G720 => AutoReason::EllPlusMinusOneMod12,
            Exceptional::G5040 => AutoReason::EllNotSeven,
        }
    }
}

/// The five tests that together rule out every maximal subgroup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Flag {
    Exc1920,
    Exc720,
    Exc5040,
    NonexcIrreducible,
    NonexcLinear,
}

impl Flag {
    pub const ALL: [Flag; 5] = [Flag::Exc1920, Flag::Exc720, Flag::Exc5040, Flag::NonexcIrreducible, Flag::NonexcLinear];

    pub fn name(self) -> &'static str {
        match self {
            Flag::Exc1920 => "exc_1920",
            Flag::Exc720 => "exc_720",
            Flag::Exc5040 => "exc_5040",
            Flag::NonexcIrreducible => "nonexc_irreducible",
            Flag::NonexcLinear => "nonexc_linear",
        }
    }

    fn exceptional(self) -> Option<Exceptional> {
        match self {
            Flag::Exc1920 => Some(Exceptional::G1920),
            Flag::Exc720 => Some(Exceptional::G720),
            Flag::Exc5040 => Some(Exceptional::G5040),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AutoReason {
    EllPlusMinusOneMod8,
    EllPlusMinusOneMod12,
    EllNotSeven,
    AboveExceptionalCutoff,
}

impl fmt::Display for AutoReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutoReason::EllPlusMinusOneMod8 => "ell = +-1 mod 8",
            AutoReason::EllPlusMinusOneMod12 => "ell = +-1 mod 12",
            AutoReason::EllNotSeven => "ell != 7",
            AutoReason::AboveExceptionalCutoff => "ell > 1441",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Witness {
    Auto(AutoReason),
    Prime(u64),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Auto(r) => write!(f, "auto ({r})"),
            Witness::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Outcome of one test at one prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TestOutcome {
    Pass,
    AutoPass(AutoReason),
    Fail,
}

impl TestOutcome {
    pub fn passed(self) -> bool {
        !matches!(self, TestOutcome::Fail)
    }
}

fn check_ell(f: &FrobeniusPoly, ell: u64) -> Result<(), VerifyError> {
    if !is_prime_u64(ell) {
        return Err(VerifyError::NotPrime(ell));
    }
    if ell == 2 {
        return Err(VerifyError::EvenEll);
    }
    if f.p % ell == 0 {
        return Err(VerifyError::EllDividesP { ell, p: f.p });
    }
    Ok(())
}

fn residue(x: i64, ell: u64) -> u64 {
    x.rem_euclid(ell as i64) as u64
}

/// `P_p(t)` reduced modulo ℓ.
pub fn charpoly_mod(f: &FrobeniusPoly, ell: u64) -> Result<FpPoly, VerifyError> {
    if f.p % ell == 0 {
        return Err(VerifyError::EllDividesP { ell, p: f.p });
    }
    let p = (f.p % ell) as i64;
    let a = residue(f.a, ell) as i64;
    let b = residue(f.b, ell) as i64;
    Ok(FpPoly::from_i64s(ell, &[p * p, -p * a, b, -a, 1]))
}

/// Passes when `(a^2/p, b/p) mod ℓ` avoids the invariant set of the given exceptional subgroup.
pub fn test_exceptional(f: &FrobeniusPoly, ell: u64, variant: Exceptional) -> Result<TestOutcome, VerifyError> {
    check_ell(f, ell)?;
    if variant.excluded_for(ell) {
        return Ok(TestOutcome::AutoPass(variant.auto_reason()));
    }
    let pinv = inv_mod(f.p % ell, ell).expect("ℓ does not divide p");
    let a = residue(f.a, ell) as u128;
    let x = (a * a % ell as u128 * pinv as u128 % ell as u128) as u64;
    let y = (residue(f.b, ell) as u128 * pinv as u128 % ell as u128) as u64;
    let hit = variant.pairs().iter().any(|&(u, v)| residue(u, ell) == x && residue(v, ell) == y);
    Ok(if hit { TestOutcome::Fail } else { TestOutcome::Pass })
}

/// Passes when `P_p mod ℓ` is irreducible.
pub fn test_irreducible(f: &FrobeniusPoly, ell: u64) -> Result<TestOutcome, VerifyError> {
    check_ell(f, ell)?;
    let q = charpoly_mod(f, ell)?;
    Ok(if quartic_is_irreducible(&q) { TestOutcome::Pass } else { TestOutcome::Fail })
}

/// Irreducibility of a monic quartic over F_ℓ (odd ℓ) with nonzero constant term,
/// by root search and a search over quadratic factor pairs.
fn quartic_is_irreducible(q: &FpPoly) -> bool {
    let l = q.modulus();
    let c = |i| q.coeff(i);
    let (c0, c1, c2, c3) = (c(0), c(1), c(2), c(3));
    if (0..l).any(|r| q.eval(r) == 0) {
        return false;
    }
    let m = |x: u64, y: u64| x * y % l;
    let sub = |x: u64, y: u64| (x + l - y % l) % l;
    for v in 1..l {
        let w = m(c0, inv_mod(v, l).unwrap());
        if v != w {
            // u (w - v) = c1 - c3 v
            let u = m(sub(c1, m(c3, v)), inv_mod(sub(w, v), l).unwrap());
            let u2 = sub(c3, u);
            if (v + w + m(u, u2)) % l == c2 {
                return false;
            }
        } else {
            if c1 != m(c3, v) {
                continue;
            }
            // u + u' = c3, u u' = c2 - 2v
            let disc = sub(m(c3, c3), m(4, sub(c2, 2 * v % l)));
            if legendre(disc as i64, l) != -1 {
                return false;
            }
        }
    }
    true
}

/// Passes when `a_p != 0 mod ℓ` and `P_p mod ℓ` has a simple root.
pub fn test_linear(f: &FrobeniusPoly, ell: u64) -> Result<TestOutcome, VerifyError> {
    check_ell(f, ell)?;
    if residue(f.a, ell) == 0 {
        return Ok(TestOutcome::Fail);
    }
    let q = charpoly_mod(f, ell)?;
    let dq = q.derivative();
    let simple = (0..ell).any(|r| q.eval(r) == 0 && dq.eval(r) != 0);
    Ok(if simple { TestOutcome::Pass } else { TestOutcome::Fail })
}

pub fn run_test(f: &FrobeniusPoly, ell: u64, flag: Flag) -> Result<TestOutcome, VerifyError> {
    match flag {
        Flag::Exc1920 | Flag::Exc720 | Flag::Exc5040 => test_exceptional(f, ell, flag.exceptional().unwrap()),
        Flag::NonexcIrreducible => test_irreducible(f, ell),
        Flag::NonexcLinear => test_linear(f, ell),
    }
}

/// Why the Galois group of the sextic is the full symmetric group.
///
/// Transitivity plus a 5-cycle makes the group primitive. A primitive group
/// with a transposition is symmetric; so is one with a 3-cycle (it contains
/// the alternating group) and an odd element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct S6Certificate {
    /// A prime where the sextic stays irreducible, or `None` if transitivity
    /// was shown by incompatible factorization patterns.
    pub six_cycle: Option<u64>,
    /// Primes whose patterns together rule out every rational factor.
    pub irreducibility_primes: Vec<u64>,
    /// Pattern (1, 5).
    pub five_cycle: u64,
    /// Pattern (1, 1, 1, 1, 2).
    pub transposition: Option<u64>,
    /// Pattern (1, 1, 1, 3), used when no transposition was found.
    pub three_cycle: Option<u64>,
    /// A pattern of odd sign, used with `three_cycle`.
    pub odd_permutation: Option<u64>,
}

impl S6Certificate {
    pub fn primes(&self) -> BTreeSet<u64> {
        let mut s: BTreeSet<u64> = self.irreducibility_primes.iter().copied().collect();
        s.extend(self.six_cycle);
        s.insert(self.five_cycle);
        s.extend(self.transposition);
        s.extend(self.three_cycle);
        s.extend(self.odd_permutation);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum S6Verdict {
    Yes(S6Certificate),
    Inconclusive(&'static str),
}

/// Certifies `Gal(g) = S_6` from cycle types of Frobenius (factorization patterns mod p).
///
/// A transitive group containing a 5-cycle is 2-transitive, hence primitive,
/// and a primitive group containing a transposition is symmetric.
pub fn is_galois_s6(g: &IntPolynomial, effort: u64) -> Result<S6Verdict, VerifyError> {
    if g.gcd(&g.derivative()).degree() != Some(0) {
        return Err(VerifyError::NotSquarefree);
    }
    if g.degree() != Some(6) {
        return Ok(S6Verdict::Inconclusive("sextic has degree 5"));
    }
    let lc = g.leading().unwrap().clone();
    let disc = crate::arith::discriminant(g).expect("degree 6");
    // possible degrees of a rational factor, as a bitmask over 1..=5
    let mut factor_degrees: u32 = 0b111110;
    let mut irreducibility_primes = Vec::new();
    let (mut six, mut five, mut two, mut three, mut odd) = (None, None, None, None, None);
    for p in primes_below(effort) {
        let bp = BigInt::from(p);
        if lc.is_multiple_of(&bp) || disc.is_multiple_of(&bp) {
            continue;
        }
        let pattern = FpPoly::new(p, g.reduce_mod(p)).factor_degrees().expect("unramified prime");
        match pattern.as_slice() {
            [6] => {
                six.get_or_insert(p);
            }
            [1, 5] => {
                five.get_or_insert(p);
            }
            [1, 1, 1, 1, 2] => {
                two.get_or_insert(p);
            }
            [1, 1, 1, 3] => {
                three.get_or_insert(p);
            }
            _ => {}
        }
        if pattern.iter().map(|d| d - 1).sum::<usize>() % 2 == 1 {
            odd.get_or_insert(p);
        }
        if six.is_none() && factor_degrees != 0 {
            let sums = subset_sums(&pattern);
            if factor_degrees & !sums != 0 {
                factor_degrees &= sums;
                irreducibility_primes.push(p);
            }
        }
        let transitive = six.is_some() || factor_degrees == 0;
        let symmetric = two.is_some() || (three.is_some() && odd.is_some());
        if let (true, Some(f), true) = (transitive, five, symmetric) {
            let (three_cycle, odd_permutation) = if two.is_some() { (None, None) } else { (three, odd) };
            return Ok(S6Verdict::Yes(S6Certificate {
                six_cycle: six,
                irreducibility_primes: if six.is_some() { Vec::new() } else { irreducibility_primes },
                five_cycle: f,
                transposition: two,
                three_cycle,
                odd_permutation,
            }));
        }
    }
    Ok(S6Verdict::Inconclusive("no certificate below the effort bound"))
}

fn subset_sums(parts: &[usize]) -> u32 {
    let mut s: u32 = 1;
    for &d in parts {
        s |= s << d;
    }
    s
}

/// Per-ℓ progress through the five tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestState {
    pub ell: u64,
    pub witnesses: BTreeMap<Flag, Witness>,
}

impl TestState {
    pub fn new(ell: u64, shortcut_1441: bool) -> Self {
        let mut witnesses = BTreeMap::new();
        for flag in [Flag::Exc1920, Flag::Exc720, Flag::Exc5040] {
            let v = flag.exceptional().unwrap();
            if v.excluded_for(ell) {
                witnesses.insert(flag, Witness::Auto(v.auto_reason()));
            } else if shortcut_1441 && ell > EXCEPTIONAL_CUTOFF {
                witnesses.insert(flag, Witness::Auto(AutoReason::AboveExceptionalCutoff));
            }
        }
        Self { ell, witnesses }
    }

    pub fn passed(&self, flag: Flag) -> bool {
        self.witnesses.contains_key(&flag)
    }

    pub fn complete(&self) -> bool {
        Flag::ALL.iter().all(|&f| self.passed(f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    /// Auto-pass the exceptional tests for ℓ above the cutoff.
    pub shortcut_1441: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub likely_nonsurjective: BTreeSet<u64>,
    pub states: BTreeMap<u64, TestState>,
    pub s6: Option<S6Verdict>,
    pub bound: u64,
    /// Largest prime used by a Frobenius test. Primes in the sextic
    /// certificate are not counted; see [`S6Certificate::primes`].
    pub largest_witness: Option<u64>,
}

/// Removes candidates for which every test finds a witness among good primes below `bound`.
pub fn likely_nonsurjective(
    cache: &mut FrobeniusCache<'_>,
    sieve: &SieveReport,
    bound: u64,
    options: VerifyOptions,
) -> Result<VerifyReport, CurveError> {
    let curve = cache.curve();
    let mut likely = sieve.possibly_nonsurjective.clone();
    let mut largest: Option<u64> = None;
    let mut s6 = None;
    if likely.contains(&2) {
        let verdict = is_galois_s6(curve.sextic(), bound).expect("curve model has a squarefree sextic");
        if let S6Verdict::Yes(_) = &verdict {
            likely.remove(&2);
        }
        s6 = Some(verdict);
    }
    let mut states: BTreeMap<u64, TestState> =
        likely.iter().filter(|&&l| l != 2).map(|&l| (l, TestState::new(l, options.shortcut_1441))).collect();
    let mut open: BTreeSet<u64> = states.iter().filter(|(_, s)| !s.complete()).map(|(&l, _)| l).collect();
    for (l, s) in &states {
        if s.complete() {
            likely.remove(l);
        }
    }
    for p in primes_below(bound) {
        if open.is_empty() {
            break;
        }
        if !curve.is_good_prime(p) {
            continue;
        }
        let fr = cache.get(p)?;
        let mut done = Vec::new();
        for &ell in &open {
            if ell == p {
                continue;
            }
            let st = states.get_mut(&ell).unwrap();
            for flag in Flag::ALL {
                if st.passed(flag) {
                    continue;
                }
                if run_test(&fr, ell, flag).expect("odd ℓ coprime to p").passed() {
                    st.witnesses.insert(flag, Witness::Prime(p));
                    largest = largest.max(Some(p));
                }
            }
            if st.complete() {
                done.push(ell);
            }
        }
        for ell in done {
            open.remove(&ell);
            likely.remove(&ell);
        }
    }
    Ok(VerifyReport { likely_nonsurjective: likely, states, s6, bound, largest_witness: largest })
}

/// `(4 [(2q^11 - 1) log rad(2qN) + 22 q^11 log(2q)] + 5 q^11 + 5)^2`, rounded up.
///
/// Evaluated in double precision; saturates at `u128::MAX`.
pub fn grh_bound(q: u64, n: u64) -> u128 {
    let rad = radical(2 * q * n).expect("positive") as f64;
    let q = q as f64;
    let q11 = libm::pow(q, 11.0);
    let inner = (2.0 * q11 - 1.0) * libm::log(rad) + 22.0 * q11 * libm::log(2.0 * q);
    let base = 4.0 * inner + 5.0 * q11 + 5.0;
    let v = libm::ceil(base * base);
    v.to_u128().unwrap_or(u128::MAX)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn charpoly_reduction() {
        // -a = -2 = 1, b = 3 = 0, -pa = -10 = 2, p^2 = 25 = 1 mod 3
        let q = charpoly_mod(&FrobeniusPoly::new(5, 2, 3), 3).unwrap();
        assert_eq!(q.coeffs(), [1, 2, 0, 1, 1]);
        assert_eq!(charpoly_mod(&FrobeniusPoly::new(5, 2, 3), 5), Err(VerifyError::EllDividesP { ell: 5, p: 5 }));
    }

    #[test]
    fn exceptional_examples() {
        let f = FrobeniusPoly::new(11, 0, 0);
        assert_eq!(test_exceptional(&f, 17, Exceptional::G1920).unwrap(), TestOutcome::AutoPass(AutoReason::EllPlusMinusOneMod8));
        assert_eq!(test_exceptional(&f, 7, Exceptional::G5040).unwrap(), TestOutcome::Fail);
        assert_eq!(test_exceptional(&f, 2, Exceptional::G5040), Err(VerifyError::EvenEll));
    }

    #[test]
    fn exceptional_720_mod_5() {
        // p = 1 mod 5 so the pair is (a^2, b); a = b = 2 gives (4, 2)
        // C_720 mod 5 = {(0,1),(0,0),(4,3),(1,1),(1,1),(0,2),(1,0),(3,2),(0,3)}
        let f = FrobeniusPoly::new(11, 2, 2);
        assert_eq!(test_exceptional(&f, 5, Exceptional::G720).unwrap(), TestOutcome::Pass);
        let f = FrobeniusPoly::new(11, 2, 3);
        assert_eq!(test_exceptional(&f, 5, Exceptional::G720).unwrap(), TestOutcome::Fail);
    }

    #[test]
    fn grh_bound_examples() {
        let b = grh_bound(7, 249) as f64;
        assert!((3.574e23..=3.582e23).contains(&b), "{b}");
        assert!(grh_bound(11, 249) > grh_bound(7, 249));
        // q = 2, N = 1: rad(4) = 2
        let q11 = 2048.0f64;
        let base = 4.0 * ((2.0 * q11 - 1.0) * 2f64.ln() + 22.0 * q11 * 4f64.ln()) + 5.0 * q11 + 5.0;
        assert_eq!(grh_bound(2, 1), (base * base).ceil() as u128);
    }

    #[test]
    fn s6_rejects_degree_five_and_reducible() {
        let quintic = IntPolynomial::from_i64s(&[1, 1, 0, 0, 0, 1]);
        assert_eq!(is_galois_s6(&quintic, 1000).unwrap(), S6Verdict::Inconclusive("sextic has degree 5"));
        // x (x^5 - x - 1): has a rational root, never transitive
        let g = IntPolynomial::from_i64s(&[0, -1, -1, 0, 0, 0, 1]);
        assert!(matches!(is_galois_s6(&g, 1000).unwrap(), S6Verdict::Inconclusive(_)));
        let sq = IntPolynomial::from_i64s(&[1, 2, 1]);
        assert_eq!(is_galois_s6(&sq, 100), Err(VerifyError::NotSquarefree));
    }

    #[test]
    fn s6_certifies_generic_sextic() {
        // x^6 + x + 1 has Galois group S_6
        let g = IntPolynomial::from_i64s(&[1, 1, 0, 0, 0, 0, 1]);
        assert!(matches!(is_galois_s6(&g, 5000).unwrap(), S6Verdict::Yes(_)));
    }

    #[test]
    fn s6_via_three_cycle_and_odd_element() {
        // 4f + h^2 for the conductor 1923 curve: no (1,1,1,1,2) pattern below 1000
        let g = IntPolynomial::from_i64s(&[-3, -6, -11, -10, -10, -4, -3]);
        let S6Verdict::Yes(cert) = is_galois_s6(&g, 1000).unwrap() else { panic!("expected a certificate") };
        assert_eq!(cert.transposition, None);
        assert_eq!((cert.six_cycle, cert.five_cycle, cert.three_cycle, cert.odd_permutation), (Some(5), 7, Some(101), Some(5)));
    }

    #[test]
    fn s6_rejects_alternating_and_psl2() {
        // Galois groups A_6 and PSL_2(F_5): primitive, but every element is even
        for g in [[-20, 24, 0, 0, 0, 0, 1], [-1, -2, -5, 0, 0, -2, 1]] {
            let g = IntPolynomial::from_i64s(&g);
            assert!(matches!(is_galois_s6(&g, 3000).unwrap(), S6Verdict::Inconclusive(_)));
        }
    }
}
