use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ArithError, IntPolynomial};

/// `Res(P, Q) = lc(P)^deg(Q) * prod Q(alpha)` over the roots `alpha` of `P`.
///
/// Computed with the subresultant pseudo-remainder sequence, so every
/// intermediate division is exact and coefficient growth stays polynomial.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt, ArithError> {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return Err(ArithError::ZeroPolynomial);
    };
    if dp == 0 {
        return Ok(num_traits::pow(p.coeff(0), dq));
    }
    if dq == 0 {
        return Ok(num_traits::pow(q.coeff(0), dp));
    }

    let ca = p.content();
    let cb = q.content();
    let mut a = p.exact_div_scalar(&ca);
    let mut b = q.exact_div_scalar(&cb);
    let scale = num_traits::pow(ca, dq) * num_traits::pow(cb, dp);

    let mut sign = BigInt::one();
    if dp < dq {
        core::mem::swap(&mut a, &mut b);
        if dp % 2 == 1 && dq % 2 == 1 {
            sign = -sign;
        }
    }

    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign = -sign;
        }
        let r = a.pseudo_rem(&b);
        a = b;
        let divisor = &g * num_traits::pow(h.clone(), delta);
        b = r.exact_div_scalar(&divisor);
        g = a.leading().unwrap().clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            let num = num_traits::pow(g.clone(), delta);
            let den = num_traits::pow(h, delta - 1);
            debug_assert!(num.is_multiple_of(&den));
            num / den
        };
        match b.degree() {
            None => return Ok(BigInt::zero()),
            Some(0) => {
                let da = a.degree().unwrap();
                // h <- lc(b)^deg(a) / h^(deg(a) - 1)
                let num = num_traits::pow(b.coeff(0), da);
                let res = if da == 0 {
                    num * h
                } else {
                    let den = num_traits::pow(h, da - 1);
                    debug_assert!(num.is_multiple_of(&den));
                    num / den
                };
                return Ok(sign * scale * res);
            }
            Some(_) => {}
        }
    }
}

/// `disc(P) = (-1)^(n(n-1)/2) Res(P, P') / lc(P)` for `deg P = n >= 1`.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt, ArithError> {
    let n = p.degree().ok_or(ArithError::ZeroPolynomial)?;
    if n == 0 {
        return Err(ArithError::ConstantPolynomial);
    }
    if n == 1 {
        return Ok(BigInt::one());
    }
    let r = resultant(p, &p.derivative())?;
    let lc = p.leading().unwrap();
    debug_assert!(r.is_multiple_of(lc));
    let d = r / lc;
    Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
}

/// Monic polynomial whose roots are the `f`-th powers of the roots of `p`.
///
/// Works through power sums: the `k`-th power sum of the new roots is the
/// `fk`-th power sum of the old ones, and Newton's identities convert power
/// sums to coefficients and back with exact integer divisions.
pub fn power_roots(p: &IntPolynomial, f: u32) -> Result<IntPolynomial, ArithError> {
    let n = p.degree().ok_or(ArithError::ZeroPolynomial)?;
    if !p.is_monic() {
        return Err(ArithError::NotMonic);
    }
    if f == 0 {
        return Err(ArithError::ZeroExponent);
    }
    if f == 1 || n == 0 {
        return Ok(p.clone());
    }
    let f = f as usize;

    // e_k of p: p = t^n - e1 t^(n-1) + e2 t^(n-2) - ...
    let e: Vec<BigInt> = (0..=n)
        .map(|k| {
            let c = p.coeff(n - k);
            if k % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect();

    let sums = power_sums(&e, n, f * n);
    let new_sums: Vec<BigInt> = (0..=n).map(|k| sums[f * k].clone()).collect();
    let new_e = elementary_from_power_sums(&new_sums, n)?;

    let mut coeffs = alloc::vec![BigInt::zero(); n + 1];
    for (k, ek) in new_e.iter().enumerate() {
        coeffs[n - k] = if k % 2 == 1 { -ek.clone() } else { ek.clone() };
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Power sums `s_0..=s_max` of the roots of the monic polynomial with
/// elementary symmetric functions `e[0..=n]` (`e[0] = 1`).
fn power_sums(e: &[BigInt], n: usize, max: usize) -> Vec<BigInt> {
    let mut s: Vec<BigInt> = Vec::with_capacity(max + 1);
    s.push(BigInt::from(n));
    for k in 1..=max {
        let mut acc = BigInt::zero();
        for i in 1..=k.min(n) {
            let term = &e[i] * if i == k { BigInt::from(k) } else { s[k - i].clone() };
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s
}

fn elementary_from_power_sums(s: &[BigInt], n: usize) -> Result<Vec<BigInt>, ArithError> {
    let mut e = alloc::vec![BigInt::one()];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for i in 1..=k {
            let term = &e[k - i] * &s[i];
            if i % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(ArithError::InexactDivision);
        }
        e.push(q);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn resultant_small_cases() {
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-3, 1])).unwrap(), BigInt::from(-1));
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[1, 0, 1])).unwrap(), BigInt::zero());
        assert_eq!(resultant(&p(&[-2, 0, 1]), &p(&[-3, 0, 1])).unwrap(), BigInt::one());
    }

    #[test]
    fn resultant_rejects_zero() {
        assert_eq!(resultant(&IntPolynomial::zero(), &p(&[1, 1])), Err(ArithError::ZeroPolynomial));
        assert_eq!(resultant(&p(&[1, 1]), &IntPolynomial::zero()), Err(ArithError::ZeroPolynomial));
    }

    #[test]
    fn resultant_with_constants() {
        assert_eq!(resultant(&p(&[3]), &p(&[1, 2, 1])).unwrap(), BigInt::from(9));
        assert_eq!(resultant(&p(&[1, 2, 1]), &p(&[5])).unwrap(), BigInt::from(25));
        assert_eq!(resultant(&p(&[5]), &p(&[7])).unwrap(), BigInt::one());
    }

    #[test]
    fn resultant_non_monic_convention() {
        // P = 2t - 1 (root 1/2), Q = t^2 + 1: lc(P)^2 * Q(1/2) = 4 * 5/4 = 5
        assert_eq!(resultant(&p(&[-1, 2]), &p(&[1, 0, 1])).unwrap(), BigInt::from(5));
        // swapped: lc(Q)^1 * prod P(+-i) = (2i-1)(-2i-1) = 5
        assert_eq!(resultant(&p(&[1, 0, 1]), &p(&[-1, 2])).unwrap(), BigInt::from(5));
    }

    #[test]
    fn discriminant_quadratic_and_cubic() {
        // b^2 - 4ac
        assert_eq!(discriminant(&p(&[3, 5, 2])).unwrap(), BigInt::from(25 - 24));
        // t^3 + a t + b: -4a^3 - 27 b^2
        assert_eq!(discriminant(&p(&[1, -1, 0, 1])).unwrap(), BigInt::from(4 - 27));
    }

    #[test]
    fn power_roots_examples() {
        let q = p(&[6, -5, 1]);
        assert_eq!(power_roots(&q, 1).unwrap(), q);
        assert_eq!(power_roots(&q, 2).unwrap(), p(&[36, -13, 1]));
        let quartic = p(&[-1, 1]).pow(4);
        assert_eq!(power_roots(&quartic, 3).unwrap(), quartic);
        assert_eq!(power_roots(&p(&[1, 2]), 2), Err(ArithError::NotMonic));
    }
}
