use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::ArithError;

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (g, x, _) = ext_gcd(a as i128 % m as i128, m as i128);
    (g == 1).then(|| x.rem_euclid(m as i128) as u64)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Deterministic Miller-Rabin for the full 64-bit range.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes strictly below `bound`, ascending.
pub fn primes_below(bound: u64) -> Vec<u64> {
    if bound < 3 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = alloc::vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j < n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// Prime factorization with multiplicity, ascending.
pub fn factorize(n: u64) -> Result<Vec<u64>, ArithError> {
    if n == 0 {
        return Err(ArithError::ZeroInput);
    }
    let mut out = Vec::new();
    let mut m = n;
    for p in [2u64, 3, 5] {
        while m % p == 0 {
            out.push(p);
            m /= p;
        }
    }
    // wheel mod 30 trial division up to a small bound
    let mut d = 7u64;
    let steps = [4u64, 2, 4, 2, 4, 6, 2, 6];
    let mut i = 0;
    while d <= 1 << 16 && d * d <= m {
        while m % d == 0 {
            out.push(d);
            m /= d;
        }
        d += steps[i];
        i = (i + 1) % steps.len();
    }
    if m > 1 {
        split_large(m, &mut out);
    }
    out.sort_unstable();
    Ok(out)
}

fn split_large(m: u64, out: &mut Vec<u64>) {
    if m == 1 {
        return;
    }
    if is_prime_u64(m) {
        out.push(m);
        return;
    }
    let mut c = 1;
    loop {
        if let Some(d) = pollard_brent(m, c) {
            split_large(d, out);
            split_large(m / d, out);
            return;
        }
        c += 1;
    }
}

fn pollard_brent(n: u64, c: u64) -> Option<u64> {
    if n % 2 == 0 {
        return Some(2);
    }
    let f = |x: u64| (mul_mod(x, x, n) + c) % n;
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1u64;
    let mut x = y;
    let mut ys = y;
    let block = 128u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..block.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += block;
        }
        r *= 2;
        if r > 1 << 40 {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(n: u64) -> Result<Vec<u64>, ArithError> {
    let mut f = factorize(n)?;
    f.dedup();
    Ok(f)
}

/// Largest `m` with `m^2 | n`.
pub fn square_part(n: u64) -> Result<u64, ArithError> {
    let f = factorize(n)?;
    let mut m = 1u64;
    let mut i = 0;
    while i < f.len() {
        let p = f[i];
        let mut e = 0;
        while i < f.len() && f[i] == p {
            e += 1;
            i += 1;
        }
        m *= p.pow(e / 2);
    }
    Ok(m)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> Result<u64, ArithError> {
    Ok(prime_divisors(n)?.into_iter().product())
}

/// Least `k >= 1` with `p^k = 1 (mod m)`.
pub fn multiplicative_order(p: i64, m: u64) -> Result<u64, ArithError> {
    if m == 0 {
        return Err(ArithError::ZeroInput);
    }
    if m == 1 {
        return Ok(1);
    }
    let base = p.rem_euclid(m as i64) as u64;
    if base.gcd(&m) != 1 {
        return Err(ArithError::NotCoprime { value: p, modulus: m });
    }
    // the order divides phi(m)
    let mut phi = 1u64;
    let f = factorize(m)?;
    let mut i = 0;
    while i < f.len() {
        let q = f[i];
        let mut e = 0;
        while i < f.len() && f[i] == q {
            e += 1;
            i += 1;
        }
        phi *= (q - 1) * q.pow(e - 1);
    }
    let mut order = phi;
    for q in prime_divisors(phi)? {
        while order % q == 0 && pow_mod(base, order / q, m) == 1 {
            order /= q;
        }
    }
    Ok(order)
}

/// Distinct prime divisors of an arbitrary-precision integer.
///
/// Trial division removes small factors, then Pollard-Brent splits the rest.
/// Fails with [`ArithError::Unfactored`] if a cofactor resists `rho_budget`
/// iterations per attempt.
pub fn big_prime_divisors(n: &BigInt) -> Result<Vec<BigUint>, ArithError> {
    let mut m = n.magnitude().clone();
    if m.is_zero() {
        return Err(ArithError::ZeroInput);
    }
    let mut out = Vec::new();
    if let Some(small) = m.to_u64() {
        return Ok(prime_divisors(small)?.into_iter().map(BigUint::from).collect());
    }
    for p in primes_below(1 << 16) {
        let bp = BigUint::from(p);
        if (&m % &bp).is_zero() {
            out.push(bp.clone());
            while (&m % &bp).is_zero() {
                m /= &bp;
            }
        }
    }
    let mut stack = alloc::vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if let Some(small) = c.to_u64() {
            out.extend(prime_divisors(small)?.into_iter().map(BigUint::from));
            continue;
        }
        if big_is_probable_prime(&c) {
            out.push(c);
            continue;
        }
        let d = (1u64..64)
            .find_map(|seed| big_rho(&c, seed, 1 << 22))
            .ok_or_else(|| ArithError::Unfactored(alloc::format!("{c}")))?;
        let other = &c / &d;
        stack.push(d);
        stack.push(other);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn big_is_probable_prime(n: &BigUint) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if *n < two {
        return false;
    }
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        let a = BigUint::from(a);
        if &a >= n {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn big_rho(n: &BigUint, c: u64, budget: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let mut x = BigUint::from(2u32);
    let mut y = x.clone();
    let mut q = BigUint::one();
    let mut iters = 0u64;
    loop {
        for _ in 0..64 {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            q = (q * diff) % n;
            iters += 1;
        }
        let g = q.gcd(n);
        if g == *n {
            return None;
        }
        if !g.is_one() {
            return Some(g);
        }
        if iters > budget {
            return None;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(249).unwrap(), [3, 83]);
        assert!(factorize(1).unwrap().is_empty());
        assert_eq!(factorize(47089).unwrap(), [7, 7, 31, 31]);
        assert_eq!(factorize(0), Err(ArithError::ZeroInput));
    }

    #[test]
    fn factorize_large_semiprimes() {
        let p = 4_294_967_291u64; // largest prime below 2^32
        let q = 4_294_967_279u64;
        assert_eq!(factorize(p * q).unwrap(), [q, p]);
        assert_eq!(factorize(u64::MAX).unwrap(), [3, 5, 17, 257, 641, 65537, 6700417]);
        let big_prime = 18_446_744_073_709_551_557u64;
        assert_eq!(factorize(big_prime).unwrap(), [big_prime]);
    }

    #[test]
    fn square_part_examples() {
        assert_eq!(square_part(249).unwrap(), 1);
        assert_eq!(square_part(47089).unwrap(), 217);
        assert_eq!(square_part(976).unwrap(), 4);
    }

    #[test]
    fn multiplicative_order_examples() {
        assert_eq!(multiplicative_order(12345, 1).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 7).unwrap(), 3);
        assert_eq!(multiplicative_order(5, 217).unwrap(), 6);
        assert_eq!(multiplicative_order(-1, 7).unwrap(), 2);
        assert_eq!(
            multiplicative_order(7, 217),
            Err(ArithError::NotCoprime { value: 7, modulus: 217 })
        );
    }

    #[test]
    fn primes_below_small() {
        assert_eq!(primes_below(20), [2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(primes_below(2), [] as [u64; 0]);
    }

    #[test]
    fn big_prime_divisors_mixed() {
        let n: BigInt = BigInt::from(2u64.pow(40)) * BigInt::from(1_000_000_007u64) * BigInt::from(998_244_353u64) * 3;
        let got = big_prime_divisors(&(-n)).unwrap();
        let want: Vec<BigUint> = [2u64, 3, 998_244_353, 1_000_000_007].into_iter().map(BigUint::from).collect();
        assert_eq!(got, want);
    }
}
