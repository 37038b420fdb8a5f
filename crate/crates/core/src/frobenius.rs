//! Point counting on genus 2 curves `y^2 + h(x) y = f(x)` over F_p and
//! F_{p^2}, and the integral Frobenius quartic built from the two counts.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{discriminant, is_prime_u64, IntPolynomial};
use crate::fp::legendre_table;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("deg f must be at most 6")]
    FDegree,
    #[error("deg h must be at most 3")]
    HDegree,
    #[error("4f + h^2 must have degree 5 or 6, got {0:?}")]
    SexticDegree(Option<usize>),
    #[error("4f + h^2 is not squarefree")]
    Singular,
    #[error("conductor must be positive")]
    Conductor,
    #[error("{0} is not a good prime for this model")]
    BadPrime(u64),
    #[error("field degree must be 1 or 2, got {0}")]
    FieldDegree(u32),
}

/// A genus 2 curve `y^2 + h(x) y = f(x)` with its conductor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveModel {
    f: IntPolynomial,
    h: IntPolynomial,
    conductor: u64,
    label: Option<String>,
    g: IntPolynomial,
    disc_g: BigInt,
}

impl CurveModel {
    pub fn new(
        f: IntPolynomial,
        h: IntPolynomial,
        conductor: u64,
        label: Option<String>,
    ) -> Result<Self, CurveError> {
        if f.degree().is_some_and(|d| d > 6) {
            return Err(CurveError::FDegree);
        }
        if h.degree().is_some_and(|d| d > 3) {
            return Err(CurveError::HDegree);
        }
        if conductor == 0 {
            return Err(CurveError::Conductor);
        }
        let g = &f.scale(&BigInt::from(4)) + &(&h * &h);
        match g.degree() {
            Some(5) | Some(6) => {}
            d => return Err(CurveError::SexticDegree(d)),
        }
        let disc_g = discriminant(&g).expect("degree checked above");
        if disc_g.is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self { f, h, conductor, label, g, disc_g })
    }

    pub fn f(&self) -> &IntPolynomial {
        &self.f
    }

    pub fn h(&self) -> &IntPolynomial {
        &self.h
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// `4f + h^2`, the right-hand side of the completed-square model.
    pub fn sextic(&self) -> &IntPolynomial {
        &self.g
    }

    pub fn sextic_discriminant(&self) -> &BigInt {
        &self.disc_g
    }

    /// Odd, and divides neither the leading coefficient nor the discriminant of `4f + h^2`.
    pub fn is_good_prime(&self, p: u64) -> bool {
        if p == 2 || !is_prime_u64(p) {
            return false;
        }
        let bp = BigInt::from(p);
        !self.g.leading().unwrap().is_multiple_of(&bp) && !self.disc_g.is_multiple_of(&bp)
    }

    /// Good primes below `bound` that do not divide the conductor.
    pub fn auxiliary_primes(&self, bound: u64) -> Vec<u64> {
        crate::arith::primes_below(bound)
            .into_iter()
            .filter(|&p| self.conductor % p != 0 && self.is_good_prime(p))
            .collect()
    }

    /// Number of points on the smooth projective model over F_{p^r}.
    pub fn count_points(&self, p: u64, r: u32) -> Result<u64, CurveError> {
        if !self.is_good_prime(p) {
            return Err(CurveError::BadPrime(p));
        }
        let g = self.g.reduce_mod(p);
        let chi = legendre_table(p);
        match r {
            1 => Ok(count_f_p(&g, p, &chi)),
            2 => Ok(count_f_p2(&g, p, &chi)),
            _ => Err(CurveError::FieldDegree(r)),
        }
    }

    pub fn frobenius_poly(&self, p: u64) -> Result<FrobeniusPoly, CurveError> {
        let n1 = self.count_points(p, 1)? as i64;
        let n2 = self.count_points(p, 2)? as i64;
        let p = p as i64;
        let a = p + 1 - n1;
        let twice_b = a * a - (p * p + 1 - n2);
        assert!(twice_b % 2 == 0, "odd middle coefficient: point counts are inconsistent");
        Ok(FrobeniusPoly { p: p as u64, a, b: twice_b / 2 })
    }
}

fn count_f_p(g: &[u64], p: u64, chi: &[i8]) -> u64 {
    let mut total: i64 = 0;
    for x in 0..p {
        let v = g.iter().rev().fold(0u64, |acc, &c| (acc * x + c) % p);
        total += 1 + chi[v as usize] as i64;
    }
    total += infinity_points(g, chi, false);
    total as u64
}

// F_{p^2} = F_p[u]/(u^2 - c). An element z = s + t u has norm s^2 - c t^2,
// and z is a square in F_{p^2} iff its norm is a square in F_p.
fn count_f_p2(g: &[u64], p: u64, chi: &[i8]) -> u64 {
    let c = least_nonresidue(p, chi);
    let mut total: i64 = 0;
    for s in 0..p {
        for t in 0..p {
            let (mut vs, mut vt) = (0u64, 0u64);
            for &coef in g.iter().rev() {
                // (vs + vt u)(s + t u) + coef
                let ns = (vs * s + (vt * t) % p * c + coef) % p;
                let nt = (vs * t + vt * s) % p;
                vs = ns;
                vt = nt;
            }
            let norm = (vs * vs + (p - (vt * vt) % p) * c) % p;
            total += 1 + chi[norm as usize] as i64;
        }
    }
    total += infinity_points(g, chi, true);
    total as u64
}

fn infinity_points(g: &[u64], chi: &[i8], quadratic_ext: bool) -> i64 {
    if g.len() == 7 && g[6] != 0 {
        // every element of F_p is a square in F_{p^2}
        if quadratic_ext {
            2
        } else {
            1 + chi[g[6] as usize] as i64
        }
    } else {
        1
    }
}

pub(crate) fn least_nonresidue(p: u64, chi: &[i8]) -> u64 {
    (2..p).find(|&c| chi[c as usize] == -1).expect("odd prime has a nonresidue")
}

/// `P_p(t) = t^4 - a t^3 + b t^2 - p a t + p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FrobeniusPoly {
    pub p: u64,
    pub a: i64,
    pub b: i64,
}

impl FrobeniusPoly {
    pub fn new(p: u64, a: i64, b: i64) -> Self {
        Self { p, a, b }
    }

    pub fn quartic(&self) -> IntPolynomial {
        let p = self.p as i64;
        IntPolynomial::from_i64s(&[p * p, -p * self.a, self.b, -self.a, 1])
    }

    /// Whether `a` and `b` lie within the bounds forced by four roots of absolute value `sqrt p`.
    pub fn within_weil_bounds(&self) -> bool {
        let p = self.p as i64;
        self.a * self.a <= 16 * p && self.b.abs() <= 6 * p
    }

    pub fn count_over(&self, r: u32) -> i64 {
        let p = self.p as i64;
        match r {
            1 => p + 1 - self.a,
            2 => p * p + 1 - (self.a * self.a - 2 * self.b),
            _ => panic!("only r = 1, 2 are supported"),
        }
    }
}

/// Memoized Frobenius polynomials of one curve, keyed by prime.
#[derive(Debug, Clone)]
pub struct FrobeniusCache<'a> {
    curve: &'a CurveModel,
    polys: BTreeMap<u64, FrobeniusPoly>,
}

impl<'a> FrobeniusCache<'a> {
    pub fn new(curve: &'a CurveModel) -> Self {
        Self { curve, polys: BTreeMap::new() }
    }

    pub fn curve(&self) -> &'a CurveModel {
        self.curve
    }

    /// Store an externally computed value (e.g. from a parallel prefill).
    pub fn insert(&mut self, f: FrobeniusPoly) {
        self.polys.insert(f.p, f);
    }

    pub fn get(&mut self, p: u64) -> Result<FrobeniusPoly, CurveError> {
        if let Some(f) = self.polys.get(&p) {
            return Ok(*f);
        }
        let f = self.curve.frobenius_poly(p)?;
        self.polys.insert(p, f);
        Ok(f)
    }

    pub fn computed(&self) -> usize {
        self.polys.len()
    }
}

impl core::fmt::Display for FrobeniusPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", self.quartic())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn curve_249() -> CurveModel {
        CurveModel::new(
            IntPolynomial::from_i64s(&[0, 1, 1]),
            IntPolynomial::from_i64s(&[1, 0, 0, 1]),
            249,
            Some("249.a.249.1".into()),
        )
        .unwrap()
    }

    #[test]
    fn good_primes_249() {
        let c = curve_249();
        assert!(!c.is_good_prime(2));
        assert!(!c.is_good_prime(3));
        assert!(c.is_good_prime(5));
        assert!(!c.is_good_prime(83));
    }

    #[test]
    fn rejects_singular_model() {
        // y^2 = x^6: g = 4x^6 is not squarefree
        let e = CurveModel::new(IntPolynomial::from_i64s(&[0, 0, 0, 0, 0, 0, 1]), IntPolynomial::zero(), 1, None);
        assert_eq!(e, Err(CurveError::Singular));
        let e = CurveModel::new(IntPolynomial::from_i64s(&[1, 0, 1]), IntPolynomial::zero(), 1, None);
        assert_eq!(e, Err(CurveError::SexticDegree(Some(2))));
    }

    #[test]
    fn frobenius_reproduces_counts() {
        let c = curve_249();
        for p in c.auxiliary_primes(60) {
            let fp = c.frobenius_poly(p).unwrap();
            assert!(fp.within_weil_bounds());
            assert_eq!(fp.count_over(1), c.count_points(p, 1).unwrap() as i64);
            assert_eq!(fp.count_over(2), c.count_points(p, 2).unwrap() as i64);
            assert_eq!(fp.quartic().coeff(0), BigInt::from(p * p));
        }
    }

    #[test]
    fn cache_memoizes() {
        let c = curve_249();
        let mut cache = FrobeniusCache::new(&c);
        let a = cache.get(5).unwrap();
        let b = cache.get(5).unwrap();
        assert_eq!(a, b);
        assert_eq!(cache.computed(), 1);
        assert!(cache.get(3).is_err());
    }
}
