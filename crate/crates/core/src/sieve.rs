//! Provable superset of the primes at which the mod-ℓ image can be a proper
//! subgroup of GSp₄(F_ℓ), built from four gcd sieves over auxiliary primes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{
    big_prime_divisors, multiplicative_order, power_roots, prime_divisors, resultant, square_part,
    ArithError, IntPolynomial,
};
use crate::fp::legendre;
use crate::frobenius::{CurveError, FrobeniusCache, FrobeniusPoly};
use crate::hecke::{small_divisors, HeckeTable, MissingHeckeData};

pub const DEFAULT_AUX_BOUND: u64 = 1000;

/// When a gcd accumulation may stop before the auxiliary primes run out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EarlyExit {
    Never,
    /// Stop once the gcd is nonzero, 7-smooth and unchanged for this many consecutive primes.
    Stable(usize),
}

impl Default for EarlyExit {
    fn default() -> Self {
        EarlyExit::Stable(5)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveConfig {
    pub aux_bound: u64,
    pub early_exit: EarlyExit,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self { aux_bound: DEFAULT_AUX_BOUND, early_exit: EarlyExit::default() }
    }
}

/// Which sub-sieve is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    Odd,
    Related,
    SelfDual { level: u64 },
    Quad(QuadraticCharacter),
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Odd => write!(f, "alg_odd"),
            Site::Related => write!(f, "alg_related"),
            Site::SelfDual { level } => write!(f, "alg_selfdual(level {level})"),
            Site::Quad(c) => write!(f, "alg_quad({c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SieveError {
    #[error(transparent)]
    MissingHeckeData(#[from] MissingHeckeData),
    #[error("endomorphisms suspected: no auxiliary prime gives a nonzero value in {}", join_sites(.0))]
    EndomorphismSuspected(Vec<Site>),
    #[error("no auxiliary primes below the bound")]
    NoAuxiliaryPrimes,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

fn join_sites(sites: &[Site]) -> String {
    let mut s = String::new();
    for (i, site) in sites.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        s.push_str(&alloc::format!("{site}"));
    }
    s
}

/// Why a prime is in the output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reason {
    AlwaysIncluded,
    DividesConductor,
    OddSubquotient,
    RelatedSubquotients,
    SelfDual { level: u64 },
    QuadCharacter(QuadraticCharacter),
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reason::AlwaysIncluded => write!(f, "always_included"),
            Reason::DividesConductor => write!(f, "divides_conductor"),
            Reason::OddSubquotient => write!(f, "odd_subquotient"),
            Reason::RelatedSubquotients => write!(f, "related_subquotients"),
            Reason::SelfDual { level } => write!(f, "self_dual({level})"),
            Reason::QuadCharacter(c) => write!(f, "quad_character({c})"),
        }
    }
}

/// Result of the character sieve for one character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadOutcome {
    Constrained(BigUint),
    /// No auxiliary prime has φ(p) = -1.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveReport {
    pub possibly_nonsurjective: BTreeSet<u64>,
    pub provenance: BTreeMap<u64, BTreeSet<Reason>>,
    pub m_odd: BigUint,
    pub m_related: BigUint,
    pub m_selfdual: BTreeMap<u64, BigUint>,
    pub m_quad: BTreeMap<QuadraticCharacter, QuadOutcome>,
    pub auxiliary_primes_used: Vec<u64>,
}

/// Running gcd of absolute values.
#[derive(Debug, Clone)]
struct GcdRun {
    g: BigUint,
    unchanged: usize,
    rule: EarlyExit,
}

impl GcdRun {
    fn new(rule: EarlyExit) -> Self {
        Self { g: BigUint::zero(), unchanged: 0, rule }
    }

    /// Returns true once the rule says to stop.
    fn push(&mut self, v: &BigInt) -> bool {
        let next = self.g.gcd(v.magnitude());
        if next == self.g {
            self.unchanged += 1;
        } else {
            self.unchanged = 0;
            self.g = next;
        }
        match self.rule {
            EarlyExit::Never => false,
            EarlyExit::Stable(k) => !self.g.is_zero() && self.unchanged >= k && is_7_smooth(&self.g),
        }
    }
}

fn is_7_smooth(n: &BigUint) -> bool {
    let mut m = n.clone();
    for p in [2u32, 3, 5, 7] {
        let bp = BigUint::from(p);
        while !m.is_zero() && (&m % &bp).is_zero() {
            m /= &bp;
        }
    }
    m.is_one()
}

fn reduced_order(p: u64, n_sq: u64) -> Result<u32, ArithError> {
    let f = multiplicative_order(p as i64, n_sq)?;
    Ok(f.gcd(&120) as u32)
}

/// `p * P^(f')(1)` for one auxiliary prime.
pub fn odd_term(frob: &FrobeniusPoly, n_sq: u64) -> Result<BigInt, ArithError> {
    let f = reduced_order(frob.p, n_sq)?;
    let pf = power_roots(&frob.quartic(), f)?;
    Ok(BigInt::from(frob.p) * pf.eval(&BigInt::one()))
}

/// `t^4 - (b - 2p) t^3 + p (a^2 - 2b + 2p) t^2 - p^2 (b - 2p) t + p^4`.
pub fn related_quartic(frob: &FrobeniusPoly) -> IntPolynomial {
    let p = BigInt::from(frob.p);
    let a = BigInt::from(frob.a);
    let b = BigInt::from(frob.b);
    let s: BigInt = &b - &p * 2;
    let mid: BigInt = &p * (&a * &a - &b * 2 + &p * 2);
    let p2 = &p * &p;
    IntPolynomial::new(alloc::vec![&p2 * &p2, -(&p2 * &s), mid, -s, BigInt::one()])
}

/// `p * Q^(f')(1) * Q^(f')(p^f')` for one auxiliary prime.
pub fn related_term(frob: &FrobeniusPoly, n_sq: u64) -> Result<BigInt, ArithError> {
    let f = reduced_order(frob.p, n_sq)?;
    let q = power_roots(&related_quartic(frob), f)?;
    let pf = num_traits::pow(BigInt::from(frob.p), f as usize);
    Ok(BigInt::from(frob.p) * q.eval(&BigInt::one()) * q.eval(&pf))
}

/// gcd over `aux` of `p * P_p^(f')(1)`, where `f'` is gcd(ord of p mod N_sq, 120).
pub fn alg_odd(cache: &mut FrobeniusCache<'_>, aux: &[u64], exit: EarlyExit) -> Result<(BigUint, Vec<u64>), SieveError> {
    let n_sq = square_part(cache.curve().conductor())?;
    run_gcd(cache, aux, exit, |fr| Ok(odd_term(fr, n_sq)?), Site::Odd)
}

/// gcd over `aux` of `p * Q_p^(f')(1) * Q_p^(f')(p^f')`.
pub fn alg_related(cache: &mut FrobeniusCache<'_>, aux: &[u64], exit: EarlyExit) -> Result<(BigUint, Vec<u64>), SieveError> {
    let n_sq = square_part(cache.curve().conductor())?;
    run_gcd(cache, aux, exit, |fr| Ok(related_term(fr, n_sq)?), Site::Related)
}

fn run_gcd(
    cache: &mut FrobeniusCache<'_>,
    aux: &[u64],
    exit: EarlyExit,
    mut term: impl FnMut(&FrobeniusPoly) -> Result<BigInt, SieveError>,
    site: Site,
) -> Result<(BigUint, Vec<u64>), SieveError> {
    if aux.is_empty() {
        return Err(SieveError::NoAuxiliaryPrimes);
    }
    let mut run = GcdRun::new(exit);
    let mut used = Vec::new();
    for &p in aux {
        let fr = cache.get(p)?;
        used.push(p);
        if run.push(&term(&fr)?) {
            break;
        }
    }
    if run.g.is_zero() {
        return Err(SieveError::EndomorphismSuspected(alloc::vec![site]));
    }
    Ok((run.g, used))
}

/// For each divisor `d <= sqrt N` of `N`: gcd over `aux` of `p * Res(P_p, Q_d)`.
pub fn alg_selfdual(
    cache: &mut FrobeniusCache<'_>,
    aux: &[u64],
    hecke: &HeckeTable,
    exit: EarlyExit,
) -> Result<(BTreeMap<u64, BigUint>, Vec<u64>), SieveError> {
    let n = cache.curve().conductor();
    let mut out = BTreeMap::new();
    let mut failed = Vec::new();
    let mut used = BTreeSet::new();
    for d in small_divisors(n) {
        let res = run_gcd(
            cache,
            aux,
            exit,
            |fr| {
                let q = hecke.q_poly(d, fr.p)?;
                Ok(BigInt::from(fr.p) * resultant(&fr.quartic(), &q)?)
            },
            Site::SelfDual { level: d },
        );
        match res {
            Ok((g, u)) => {
                used.extend(u);
                out.insert(d, g);
            }
            Err(SieveError::EndomorphismSuspected(s)) => {
                used.extend(aux.iter().copied());
                failed.extend(s);
            }
            Err(e) => return Err(e),
        }
    }
    if !failed.is_empty() {
        return Err(SieveError::EndomorphismSuspected(failed));
    }
    Ok((out, used.into_iter().collect()))
}

fn keep<T>(r: Result<T, SieveError>, failed: &mut Vec<Site>) -> Result<Option<T>, SieveError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(SieveError::EndomorphismSuspected(s)) => {
            failed.extend(s);
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

/// One local factor of a quadratic character.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum LocalFactor {
    /// Kronecker symbol of the prime discriminant `±q` for odd `q`.
    Odd(u64),
    /// Conductor 4: `(-4 / .)`.
    Minus4,
    /// Conductor 8: `(8 / .)`.
    Eight,
}

impl LocalFactor {
    fn discriminant(self) -> i64 {
        match self {
            LocalFactor::Odd(q) if q % 4 == 1 => q as i64,
            LocalFactor::Odd(q) => -(q as i64),
            LocalFactor::Minus4 => -4,
            LocalFactor::Eight => 8,
        }
    }

    fn eval(self, p: u64) -> i8 {
        match self {
            LocalFactor::Odd(q) => legendre(p as i64, q),
            LocalFactor::Minus4 => {
                if p % 4 == 1 {
                    1
                } else {
                    -1
                }
            }
            LocalFactor::Eight => {
                if p % 8 == 1 || p % 8 == 7 {
                    1
                } else {
                    -1
                }
            }
        }
    }
}

/// A quadratic Dirichlet character of modulus dividing `N`, identified by the
/// fundamental discriminant `D` with `φ(p) = (D / p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QuadraticCharacter {
    discriminant: i64,
}

impl QuadraticCharacter {
    pub fn discriminant(&self) -> i64 {
        self.discriminant
    }

    fn factors(&self) -> Vec<LocalFactor> {
        let mut d = self.discriminant.unsigned_abs();
        let mut out = Vec::new();
        let v2 = d.trailing_zeros();
        d >>= v2;
        for q in prime_divisors(d).unwrap_or_default() {
            out.push(LocalFactor::Odd(q));
        }
        let odd_sign: i64 = out.iter().map(|f| f.discriminant().signum()).product();
        match v2 {
            0 => {}
            2 => out.push(LocalFactor::Minus4),
            _ => {
                out.push(LocalFactor::Eight);
                if odd_sign != self.discriminant.signum() {
                    out.push(LocalFactor::Minus4);
                }
            }
        }
        out
    }

    /// `φ(p)` for a prime `p` not dividing the modulus; `0` if it does.
    pub fn eval(&self, p: u64) -> i8 {
        if p == 2 && self.discriminant % 2 == 0 {
            return 0;
        }
        if self.discriminant % (p as i64) == 0 {
            return 0;
        }
        if p == 2 {
            // Kronecker symbol at 2 for odd D
            return if self.discriminant.rem_euclid(8) == 1 || self.discriminant.rem_euclid(8) == 7 { 1 } else { -1 };
        }
        self.factors().into_iter().map(|f| f.eval(p)).product()
    }
}

impl fmt::Display for QuadraticCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "kronecker({})", self.discriminant)
    }
}

fn generators(n: u64) -> Vec<LocalFactor> {
    let v2 = n.trailing_zeros();
    let mut out: Vec<LocalFactor> =
        prime_divisors(n >> v2).unwrap_or_default().into_iter().map(LocalFactor::Odd).collect();
    match v2 {
        0 | 1 => {}
        2 => out.push(LocalFactor::Minus4),
        _ => {
            out.push(LocalFactor::Minus4);
            out.push(LocalFactor::Eight);
        }
    }
    out
}

/// Dimension over F_2 of the quadratic characters of modulus `n`.
pub fn character_space_dimension(n: u64) -> usize {
    generators(n).len()
}

/// All nontrivial quadratic characters of modulus `n`, sorted by discriminant.
pub fn quadratic_characters(n: u64) -> Vec<QuadraticCharacter> {
    let gens = generators(n);
    let mut out: Vec<QuadraticCharacter> = (1u64..(1 << gens.len()))
        .map(|mask| {
            let d = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, g)| g.discriminant())
                .product();
            QuadraticCharacter { discriminant: d }
        })
        .collect();
    out.sort();
    out
}

/// For each nontrivial `φ`: gcd of `p * a_p` over `p` in `aux` with `φ(p) = -1` and `a_p != 0`.
pub fn alg_quad(
    cache: &mut FrobeniusCache<'_>,
    aux: &[u64],
    exit: EarlyExit,
) -> Result<(BTreeMap<QuadraticCharacter, QuadOutcome>, Vec<u64>), SieveError> {
    let chars = quadratic_characters(cache.curve().conductor());
    let mut out = BTreeMap::new();
    let mut failed = Vec::new();
    let mut used = BTreeSet::new();
    for phi in chars {
        let mut run = GcdRun::new(exit);
        let mut qualifying = 0usize;
        for &p in aux {
            if phi.eval(p) != -1 {
                continue;
            }
            let fr = cache.get(p)?;
            used.insert(p);
            qualifying += 1;
            if fr.a == 0 {
                continue;
            }
            if run.push(&(BigInt::from(p) * fr.a)) {
                break;
            }
        }
        if qualifying == 0 {
            out.insert(phi, QuadOutcome::Unconstrained);
        } else if run.g.is_zero() {
            failed.push(Site::Quad(phi));
        } else {
            out.insert(phi, QuadOutcome::Constrained(run.g));
        }
    }
    if !failed.is_empty() {
        return Err(SieveError::EndomorphismSuspected(failed));
    }
    Ok((out, used.into_iter().collect()))
}

/// Runs all four sieves and assembles the candidate set with provenance.
///
/// Every sieve runs even if an earlier one gets stuck at zero, so the error
/// names every failing site.
pub fn possibly_nonsurjective(
    cache: &mut FrobeniusCache<'_>,
    hecke: &HeckeTable,
    config: &SieveConfig,
) -> Result<SieveReport, SieveError> {
    let curve = cache.curve();
    let n = curve.conductor();
    let aux = curve.auxiliary_primes(config.aux_bound);
    if aux.is_empty() {
        return Err(SieveError::NoAuxiliaryPrimes);
    }
    let exit = config.early_exit;
    let mut failed = Vec::new();
    let mut used = BTreeSet::new();

    let odd = keep(alg_odd(cache, &aux, exit), &mut failed)?;
    let related = keep(alg_related(cache, &aux, exit), &mut failed)?;
    let selfdual = keep(alg_selfdual(cache, &aux, hecke, exit), &mut failed)?;
    let quad = keep(alg_quad(cache, &aux, exit), &mut failed)?;
    if !failed.is_empty() {
        return Err(SieveError::EndomorphismSuspected(failed));
    }
    let (m_odd, u) = odd.unwrap();
    used.extend(u);
    let (m_related, u) = related.unwrap();
    used.extend(u);
    let (m_selfdual, u) = selfdual.unwrap();
    used.extend(u);
    let (m_quad, u) = quad.unwrap();
    used.extend(u);

    let mut provenance: BTreeMap<u64, BTreeSet<Reason>> = BTreeMap::new();
    let mut add = |p: u64, r: Reason| {
        provenance.entry(p).or_default().insert(r);
    };
    for p in [2, 3, 5, 7] {
        add(p, Reason::AlwaysIncluded);
    }
    for p in prime_divisors(n)? {
        add(p, Reason::DividesConductor);
    }
    let mut tag = |m: &BigUint, r: Reason| -> Result<(), SieveError> {
        for q in big_prime_divisors(&BigInt::from(m.clone()))? {
            // a prime this large can never be a divisor of a useful gcd; refuse rather than truncate
            let q = q.to_u64().ok_or_else(|| ArithError::Unfactored(alloc::format!("{q}")))?;
            add(q, r);
        }
        Ok(())
    };
    tag(&m_odd, Reason::OddSubquotient)?;
    tag(&m_related, Reason::RelatedSubquotients)?;
    for (&d, m) in &m_selfdual {
        tag(m, Reason::SelfDual { level: d })?;
    }
    for (phi, outcome) in &m_quad {
        if let QuadOutcome::Constrained(m) = outcome {
            tag(m, Reason::QuadCharacter(*phi))?;
        }
    }
    Ok(SieveReport {
        possibly_nonsurjective: provenance.keys().copied().collect(),
        provenance,
        m_odd,
        m_related,
        m_selfdual,
        m_quad,
        auxiliary_primes_used: used.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::CurveModel;

    fn curve_249() -> CurveModel {
        CurveModel::new(IntPolynomial::from_i64s(&[0, 1, 1]), IntPolynomial::from_i64s(&[1, 0, 0, 1]), 249, None).unwrap()
    }

    #[test]
    fn related_quartic_zero_trace() {
        let q = related_quartic(&FrobeniusPoly::new(5, 0, 0));
        assert_eq!(q, IntPolynomial::from_i64s(&[625, 250, 50, 10, 1]));
    }

    #[test]
    fn related_quartic_cross_products() {
        // roots 1, 6 (product 6) and 2, 3 (product 6): p = 6 is fine for the identity
        let p = 6i64;
        let roots = [1i64, 6, 2, 3];
        let big: Vec<BigInt> = roots.iter().map(|&r| BigInt::from(r)).collect();
        let quartic = IntPolynomial::from_roots(&big);
        let a = -quartic.coeff(3);
        let b = quartic.coeff(2);
        let fr = FrobeniusPoly::new(p as u64, a.try_into().unwrap(), b.try_into().unwrap());
        let mut cross = Vec::new();
        for i in 0..4 {
            for j in (i + 1)..4 {
                let prod = roots[i] * roots[j];
                if !((i, j) == (0, 1) || (i, j) == (2, 3)) {
                    cross.push(BigInt::from(prod));
                }
            }
        }
        assert_eq!(related_quartic(&fr), IntPolynomial::from_roots(&cross));
    }

    #[test]
    fn character_counts() {
        assert_eq!(quadratic_characters(249).len(), 3);
        assert_eq!(quadratic_characters(976).len(), 7);
        assert!(quadratic_characters(2).is_empty());
        assert_eq!(character_space_dimension(12), 2);
        let ds: Vec<i64> = quadratic_characters(249).iter().map(|c| c.discriminant()).collect();
        assert_eq!(ds, [-83, -3, 249]);
    }

    #[test]
    fn characters_are_multiplicative() {
        for n in [976u64, 249, 3125, 15876, 40] {
            for phi in quadratic_characters(n) {
                for p in crate::arith::primes_below(200) {
                    if n % p == 0 {
                        continue;
                    }
                    // direct Kronecker symbol (D / p) for odd p, Euler's criterion
                    let want = if p == 2 { phi.eval(2) } else { legendre(phi.discriminant(), p) };
                    assert_eq!(phi.eval(p), want, "{phi} at {p}");
                }
            }
        }
    }

    #[test]
    fn single_prime_odd_term() {
        let c = curve_249();
        let mut cache = FrobeniusCache::new(&c);
        let fr = cache.get(5).unwrap();
        let (m, used) = alg_odd(&mut cache, &[5], EarlyExit::Never).unwrap();
        assert_eq!(used, [5]);
        let want = BigInt::from(5) * fr.quartic().eval(&BigInt::one());
        assert_eq!(&m, want.magnitude());
    }

    #[test]
    fn worked_example_superset() {
        let c = curve_249();
        let mut cache = FrobeniusCache::new(&c);
        let r = possibly_nonsurjective(&mut cache, &HeckeTable::default(), &SieveConfig::default()).unwrap();
        assert_eq!(r.possibly_nonsurjective.into_iter().collect::<Vec<_>>(), [2, 3, 5, 7, 83]);
    }
}
