//! Polynomials in `z` written as `z^2+2*z-1`.

use abelsurf_core::IntPolynomial;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("bad polynomial {text:?}: {reason}")]
pub struct PolyParseError {
    pub text: String,
    pub reason: &'static str,
}

/// Canonical form: descending degree, no spaces, unit coefficients omitted.
pub fn format_poly(p: &IntPolynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        if c.is_negative() {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let mag = c.abs();
        match k {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push('z');
                if k > 1 {
                    out.push('^');
                    out.push_str(&k.to_string());
                }
            }
        }
    }
    out
}

/// Accepts the canonical form and minor variants: whitespace, `z^1`,
/// explicit unit coefficients and repeated monomials (which are summed).
pub fn parse_poly(text: &str) -> Result<IntPolynomial, PolyParseError> {
    let err = |reason| PolyParseError { text: text.to_string(), reason };
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err("empty"));
    }
    let mut coeffs: Vec<BigInt> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[i] == b'+' || bytes[i] == b'-' {
            if bytes[i] == b'-' {
                sign = -sign;
            }
            i += 1;
        } else if i > 0 {
            return Err(err("missing operator between terms"));
        }
        let start = i;
        while i < bytes.len() && bytes[i] != b'+' && bytes[i] != b'-' {
            i += 1;
        }
        let term = &s[start..i];
        if term.is_empty() {
            return Err(err("empty term"));
        }
        let (coef, deg) = parse_term(term).ok_or_else(|| err("malformed term"))?;
        if coeffs.len() <= deg {
            coeffs.resize(deg + 1, BigInt::zero());
        }
        coeffs[deg] += sign * coef;
    }
    Ok(IntPolynomial::new(coeffs))
}

fn parse_term(term: &str) -> Option<(BigInt, usize)> {
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    let (coef, mono) = match term.split_once('*') {
        Some((c, m)) => (Some(c), m),
        None if term.contains('z') => (None, term),
        None => return digits(term).then(|| (term.parse().unwrap(), 0)),
    };
    let coef = match coef {
        Some(c) if digits(c) => c.parse().ok()?,
        Some(_) => return None,
        None => BigInt::one(),
    };
    let deg = match mono.strip_prefix('z')? {
        "" => 1,
        rest => {
            let e = rest.strip_prefix('^')?;
            if !digits(e) {
                return None;
            }
            e.parse().ok()?
        }
    };
    Some((coef, deg))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(format_poly(&p(&[-1, 2, 1])), "z^2+2*z-1");
        assert_eq!(format_poly(&p(&[0, -1, 0, 1])), "z^3-z");
        assert_eq!(format_poly(&p(&[1])), "1");
        assert_eq!(format_poly(&p(&[])), "0");
        assert_eq!(format_poly(&p(&[-7])), "-7");
    }

    #[test]
    fn parse_variants() {
        assert_eq!(parse_poly("z^2+2*z-1").unwrap(), p(&[-1, 2, 1]));
        assert_eq!(parse_poly(" z ^ 2 + 2 * z - 1 ").unwrap(), p(&[-1, 2, 1]));
        assert_eq!(parse_poly("1*z^1+z").unwrap(), p(&[0, 2]));
        assert_eq!(parse_poly("-z^4").unwrap(), p(&[0, 0, 0, 0, -1]));
        assert_eq!(parse_poly("1").unwrap(), p(&[1]));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "z^", "2z", "x+1", "z^2++1", "3*", "z^-1"] {
            assert!(parse_poly(bad).is_err(), "{bad}");
        }
    }

    proptest::proptest! {
        #[test]
        fn round_trip(c in proptest::collection::vec(-1000i64..1000, 0..8)) {
            let q = p(&c);
            proptest::prop_assert_eq!(parse_poly(&format_poly(&q)).unwrap(), q);
        }
    }
}
