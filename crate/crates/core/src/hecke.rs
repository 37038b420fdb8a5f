//! Characteristic polynomials of Hecke operators on weight 2 newforms, and
//! the L-polynomial factor recovered from them.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime_u64, IntPolynomial};

/// Levels whose weight 2 newspace on Γ₀(d) is zero, ignoring levels that are
/// zero only because every form there is old.
pub const ZERO_NEWSPACE_LEVELS: [u64; 15] = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 13, 16, 18, 25];

pub fn has_trivial_newspace(level: u64) -> bool {
    ZERO_NEWSPACE_LEVELS.contains(&level)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeckeError {
    #[error("level must be positive")]
    ZeroLevel,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {prime} divides level {level}")]
    PrimeDividesLevel { level: u64, prime: u64 },
    #[error("polynomial for ({level}, {prime}) is not monic")]
    NotMonic { level: u64, prime: u64 },
    #[error("polynomial for ({level}, {prime}) has degree {found}, other primes at this level give {expected}")]
    DegreeMismatch { level: u64, prime: u64, expected: usize, found: usize },
    #[error("polynomial for ({level}, {prime}) has a root outside the Ramanujan interval")]
    WeilBound { level: u64, prime: u64 },
    #[error("conflicting entries for ({level}, {prime})")]
    Conflict { level: u64, prime: u64 },
}

/// No table entry for a level that has a nonzero newspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no Hecke data for level {level} at p = {prime}")]
pub struct MissingHeckeData {
    pub level: u64,
    pub prime: u64,
}

/// `(level, prime) -> charpoly of T_prime on S_2^new(Γ₀(level))`, in the variable `z`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeckeTable {
    entries: BTreeMap<(u64, u64), IntPolynomial>,
    source: String,
}

impl HeckeTable {
    pub fn new(source: impl Into<String>) -> Self {
        Self { entries: BTreeMap::new(), source: source.into() }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn set_source(&mut self, source: impl Into<String>) {
        self.source = source.into();
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Validate and add one entry. Re-inserting an identical entry is a no-op.
    pub fn insert(&mut self, level: u64, prime: u64, poly: IntPolynomial) -> Result<(), HeckeError> {
        if level == 0 {
            return Err(HeckeError::ZeroLevel);
        }
        if !is_prime_u64(prime) {
            return Err(HeckeError::NotPrime(prime));
        }
        if level % prime == 0 {
            return Err(HeckeError::PrimeDividesLevel { level, prime });
        }
        if !poly.is_monic() {
            return Err(HeckeError::NotMonic { level, prime });
        }
        let found = poly.degree().unwrap();
        if let Some(expected) = self.dimension(level) {
            if expected != found {
                return Err(HeckeError::DegreeMismatch { level, prime, expected, found });
            }
        }
        if !roots_in_ramanujan_interval(&poly, prime) {
            return Err(HeckeError::WeilBound { level, prime });
        }
        match self.entries.get(&(level, prime)) {
            Some(old) if *old != poly => Err(HeckeError::Conflict { level, prime }),
            Some(_) => Ok(()),
            None => {
                self.entries.insert((level, prime), poly);
                Ok(())
            }
        }
    }

    pub fn get(&self, level: u64, prime: u64) -> Option<&IntPolynomial> {
        self.entries.get(&(level, prime))
    }

    /// Entries sorted by `(level, prime)`.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64, &IntPolynomial)> {
        self.entries.iter().map(|(&(d, p), h)| (d, p, h))
    }

    pub fn levels(&self) -> BTreeSet<u64> {
        self.entries.keys().map(|&(d, _)| d).collect()
    }

    /// Newspace dimension as recorded by any entry at this level.
    pub fn dimension(&self, level: u64) -> Option<usize> {
        if has_trivial_newspace(level) {
            return Some(0);
        }
        self.entries
            .range((level, 0)..=(level, u64::MAX))
            .next()
            .map(|(_, h)| h.degree().unwrap())
    }

    /// `Q_d(t)` for level `d` at `p`; levels with trivial newspace give `1`.
    pub fn q_poly(&self, level: u64, prime: u64) -> Result<IntPolynomial, MissingHeckeData> {
        if has_trivial_newspace(level) {
            return Ok(IntPolynomial::one());
        }
        self.get(level, prime)
            .map(|h| hecke_q_poly(h, prime))
            .ok_or(MissingHeckeData { level, prime })
    }

    pub fn merge(&mut self, other: &HeckeTable) -> Result<(), HeckeError> {
        for (d, p, h) in other.iter() {
            self.insert(d, p, h.clone())?;
        }
        Ok(())
    }
}

/// Divisors `d` of `n` with `d^2 <= n` whose newspace is not known to be zero.
pub fn required_levels(n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 && !has_trivial_newspace(d) {
            out.insert(d);
        }
        d += 1;
    }
    out
}

/// All divisors `d` of `n` with `d^2 <= n`, ascending.
pub fn small_divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
        }
        d += 1;
    }
    out
}

/// `t^n H((t^2 + p) / t)` for `H` of degree `n`.
///
/// If `H = prod (z - a_i)` this is `prod (t^2 - a_i t + p)`.
pub fn hecke_q_poly(h: &IntPolynomial, p: u64) -> IntPolynomial {
    let Some(n) = h.degree() else {
        return IntPolynomial::zero();
    };
    let shift = IntPolynomial::new(alloc::vec![BigInt::from(p), BigInt::from(0), BigInt::one()]);
    let mut out = IntPolynomial::zero();
    let mut pw = IntPolynomial::one();
    for k in 0..=n {
        let term = (&pw * &IntPolynomial::monomial(BigInt::one(), n - k)).scale(&h.coeff(k));
        out = &out + &term;
        pw = &pw * &shift;
    }
    out
}

/// Every root of `h` is real and lies in `[-2 sqrt p, 2 sqrt p]`.
///
/// Equivalent to every root of `hecke_q_poly(h, p)` having absolute value
/// `sqrt p`. Decided exactly with a Sturm sequence on the squarefree part;
/// the endpoint signs are computed in Z[sqrt p].
pub fn roots_in_ramanujan_interval(h: &IntPolynomial, p: u64) -> bool {
    let Some(deg) = h.degree() else {
        return false;
    };
    if deg == 0 {
        return true;
    }
    let mut s = h.squarefree_part().primitive_part();
    let mut on_boundary = 0;
    // z^2 - 4p vanishes at both endpoints; they are irrational, so a root there brings its conjugate
    let edge = IntPolynomial::new(alloc::vec![BigInt::from(-4) * BigInt::from(p), BigInt::zero(), BigInt::one()]);
    if sign_at_sqrt(&s, 2, p) == 0 {
        s = match s.exact_div(&edge) {
            Ok(q) => q,
            Err(_) => return false,
        };
        on_boundary = 2;
    }
    let inside = match s.degree() {
        Some(0) => 0,
        _ => {
            let chain = sturm_chain(&s);
            let v = |u: i64| variations(chain.iter().map(|f| sign_at_sqrt(f, u, p)));
            v(-2) - v(2)
        }
    };
    inside + on_boundary == s.degree().unwrap() + on_boundary
}

fn sturm_chain(s: &IntPolynomial) -> Vec<IntPolynomial> {
    let mut chain = alloc::vec![s.clone(), shrink(&s.derivative())];
    loop {
        let n = chain.len();
        let (a, b) = (&chain[n - 2], &chain[n - 1]);
        if b.degree().unwrap_or(0) == 0 {
            break;
        }
        let mut r = a.pseudo_rem(b);
        // pseudo_rem scales by lc(b)^(da - db + 1); undo a negative factor to keep Sturm signs
        let e = a.degree().unwrap() - b.degree().unwrap() + 1;
        if b.leading().unwrap().is_negative() && e % 2 == 1 {
            r = r.scale(&BigInt::from(-1));
        }
        if r.is_zero() {
            break;
        }
        chain.push(shrink(&r).scale(&BigInt::from(-1)));
    }
    chain
}

/// Divide by the (positive) content, keeping the sign.
fn shrink(f: &IntPolynomial) -> IntPolynomial {
    f.exact_div_scalar(&f.content())
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Sign of `f(u sqrt p)`.
fn sign_at_sqrt(f: &IntPolynomial, u: i64, p: u64) -> i8 {
    // f(u sqrt p) = a + b sqrt p
    let (mut a, mut b) = (BigInt::zero(), BigInt::zero());
    let pb = BigInt::from(p);
    let mut rational_part = BigInt::one();
    for (k, c) in f.coeffs().iter().enumerate() {
        // (u sqrt p)^k = u^k p^(k/2) [sqrt p if k odd]
        if k % 2 == 0 {
            a += c * &rational_part;
        } else {
            b += c * &rational_part;
        }
        if k % 2 == 0 {
            rational_part *= u;
        } else {
            rational_part = rational_part * u * &pb;
        }
    }
    let sa = sign(&a);
    let sb = sign(&b);
    if sb == 0 || sa == sb {
        return if sa == 0 { sb } else { sa };
    }
    if sa == 0 {
        return sb;
    }
    // opposite signs: compare a^2 with p b^2
    let lhs = &a * &a;
    let rhs = &b * &b * &pb;
    match lhs.cmp(&rhs) {
        core::cmp::Ordering::Greater => sa,
        core::cmp::Ordering::Less => sb,
        core::cmp::Ordering::Equal => 0,
    }
}

fn sign(x: &BigInt) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_negative() {
        -1
    } else {
        1
    }
}
