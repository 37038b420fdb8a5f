//! Dense polynomials over a prime field F_p, coefficients ascending in `u64`.
//!
//! Only what the verification tests need: arithmetic, gcd, powering modulo a
//! polynomial and distinct-degree factorization patterns.

use alloc::vec;
use alloc::vec::Vec;

use crate::arith::{inv_mod, mul_mod, pow_mod};

/// Polynomial over F_p; `coeffs` is normalized (no trailing zeros).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        for c in coeffs.iter_mut() {
            *c %= p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { p, coeffs }
    }

    pub fn from_i64s(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        Self { p, coeffs: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::new(p, vec![1])
    }

    /// The polynomial `t`.
    pub fn x(p: u64) -> Self {
        Self::new(p, vec![0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        Self::new(self.p, c)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| (self.coeff(i) + o.coeff(i)) % self.p).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new(self.p, (0..n).map(|i| (self.coeff(i) + self.p - o.coeff(i)) % self.p).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    /// Scale to leading coefficient 1. The zero polynomial is returned as is.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None => self.clone(),
            Some(&lc) => {
                let inv = inv_mod(lc, self.p).expect("nonzero residue mod prime");
                Self::new(self.p, self.coeffs.iter().map(|&c| mul_mod(c, inv, self.p)).collect())
            }
        }
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = inv_mod(d.coeffs[dd], self.p).expect("nonzero residue mod prime");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = mul_mod(r[k + dd], inv, self.p);
            q[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let t = mul_mod(c, dj, self.p);
                r[k + j] = (r[k + j] + self.p - t) % self.p;
            }
        }
        (Self::new(self.p, q), Self::new(self.p, r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Self {
        let mut base = self.rem(m);
        let mut acc = Self::one(self.p).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(_) => self.gcd(&self.derivative()).degree() == Some(0),
        }
    }

    /// Degrees of the irreducible factors, ascending, for a squarefree input.
    ///
    /// Returns `None` if the input is zero or not squarefree.
    pub fn factor_degrees(&self) -> Option<Vec<usize>> {
        if !self.is_squarefree() {
            return None;
        }
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = Self::x(self.p);
        let mut xp = x.clone();
        let mut d = 0;
        while let Some(n) = f.degree() {
            if n == 0 {
                break;
            }
            d += 1;
            if 2 * d > n {
                out.push(n);
                break;
            }
            xp = xp.pow_mod(self.p, &f);
            let g = xp.sub(&x).gcd(&f);
            let k = g.degree().unwrap_or(0);
            if k > 0 {
                out.extend(core::iter::repeat(d).take(k / d));
                f = f.div_rem(&g).0;
                xp = xp.rem(&f);
            }
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&r| self.eval(r) == 0).collect()
    }
}

/// Table of quadratic characters: `table[x]` is `1`, `-1` or `0` for `x mod p`.
pub fn legendre_table(p: u64) -> Vec<i8> {
    let mut t = vec![-1i8; p as usize];
    t[0] = 0;
    for x in 1..=(p / 2) {
        t[mul_mod(x, x, p) as usize] = 1;
    }
    t
}

/// Legendre symbol `(a / p)` for an odd prime `p`.
pub fn legendre(a: i64, p: u64) -> i8 {
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(p: u64, c: &[i64]) -> FpPoly {
        FpPoly::from_i64s(p, c)
    }

    #[test]
    fn div_rem_roundtrip() {
        let a = fp(7, &[3, 1, 4, 1, 5]);
        let b = fp(7, &[2, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn factor_degrees_small() {
        // t^2 + 1 is irreducible mod 3
        assert_eq!(fp(3, &[1, 0, 1]).factor_degrees().unwrap(), [2]);
        // t^2 - 1 splits
        assert_eq!(fp(3, &[-1, 0, 1]).factor_degrees().unwrap(), [1, 1]);
        // (t^2+1)(t^3 - t + 1) mod 3: t^3 - t + 1 is irreducible (Artin-Schreier)
        let g = fp(3, &[1, 0, 1]).mul(&fp(3, &[1, -1, 0, 1]));
        assert_eq!(g.factor_degrees().unwrap(), [2, 3]);
        assert!(fp(5, &[1, 2, 1]).factor_degrees().is_none());
    }

    #[test]
    fn legendre_agrees_with_table() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            let t = legendre_table(p);
            for a in 0..p {
                assert_eq!(t[a as usize], legendre(a as i64, p));
            }
        }
    }
}
