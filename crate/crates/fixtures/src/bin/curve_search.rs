//! Search small models `y^2 + h y = f` by absolute minimal discriminant.
//!
//! Usage: curve_search RANGE DISC [DISC...]

use std::collections::BTreeMap;

use abelsurf_core::arith::{discriminant, is_prime_u64};
use abelsurf_core::{CurveModel, IntPolynomial};
use num_bigint::BigInt;
use num_traits::Signed;

const P: u64 = 2_147_483_647;

fn inv(a: u64) -> u64 {
    let (mut r, mut b, mut e) = (1u64, a % P, P - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % P;
        }
        b = b * b % P;
        e >>= 1;
    }
    r
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// `res(a, b) mod P` by the Euclidean algorithm; inputs trimmed and nonzero.
fn res_mod(a: Vec<u64>, b: Vec<u64>) -> u64 {
    let (mut a, mut b) = (a, b);
    let mut acc = 1u64;
    loop {
        let (m, n) = (a.len() - 1, b.len() - 1);
        if n == 0 {
            let mut r = 1;
            for _ in 0..m {
                r = r * b[0] % P;
            }
            return acc * r % P;
        }
        // res(a, b) = (-1)^{mn} lc(b)^{m - deg r} res(b, r) with r = a mod b
        let mut r = a.clone();
        let lb = inv(b[n]);
        while r.len() > n {
            let q = r[r.len() - 1] * lb % P;
            let s = r.len() - 1 - n;
            for i in 0..=n {
                r[s + i] = (r[s + i] + P - q * b[i] % P) % P;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        if r.is_empty() {
            return 0;
        }
        if (m * n) % 2 == 1 {
            acc = (P - acc) % P;
        }
        for _ in 0..(m - (r.len() - 1)) {
            acc = acc * b[n] % P;
        }
        a = b;
        b = r;
    }
}

/// Discriminant of `g` as a binary sextic, modulo P.
fn disc6_mod(g: &[i64; 7]) -> u64 {
    let mut v: Vec<u64> = g.iter().map(|&c| c.rem_euclid(P as i64) as u64).collect();
    trim(&mut v);
    let n = v.len() - 1;
    let d: Vec<u64> = (1..=n).map(|i| v[i] * i as u64 % P).collect();
    let lc = v[n];
    let mut disc = res_mod(v, d) * inv(lc) % P;
    if (n * (n - 1) / 2) % 2 == 1 {
        disc = (P - disc) % P;
    }
    if n == 5 {
        disc = disc * lc % P * lc % P;
    }
    disc
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let r: i64 = args[1].parse().unwrap();
    let targets: Vec<u64> = args[2..].iter().map(|s| s.parse().unwrap()).collect();
    let side = (2 * r + 1) as usize;
    let mut found: BTreeMap<u64, BTreeMap<Vec<(i64, i64)>, Vec<(Vec<i64>, Vec<i64>)>>> = BTreeMap::new();
    let scale = BigInt::from(4096);
    let residues: Vec<u64> = targets
        .iter()
        .flat_map(|&t| {
            let v = t % P * 4096 % P;
            [v, (P - v) % P]
        })
        .collect();
    for hm in 0..16u32 {
        let h: Vec<i64> = (0..4).map(|i| ((hm >> i) & 1) as i64).collect();
        let hp = IntPolynomial::from_i64s(&h);
        let h2 = &hp * &hp;
        for idx in 0..side.pow(7) {
            let mut k = idx;
            let f: Vec<i64> = (0..7)
                .map(|_| {
                    let c = (k % side) as i64 - r;
                    k /= side;
                    c
                })
                .collect();
            if f[6] == 0 && f[5] <= 0 {
                continue;
            }
            let mut gi = [0i64; 7];
            for i in 0..7 {
                gi[i] = 4 * f[i] + if i < h2.coeffs().len() { i64::try_from(&h2.coeffs()[i]).unwrap() } else { 0 };
            }
            if gi[6] == 0 && gi[5] == 0 {
                continue;
            }
            let dm = disc6_mod(&gi);
            if !residues.contains(&dm) {
                continue;
            }
            let g = &IntPolynomial::from_i64s(&f).scale(&BigInt::from(4)) + &h2;
            let d6 = match g.degree() {
                Some(6) => match discriminant(&g) {
                    Ok(d) => d,
                    Err(_) => continue,
                },
                Some(5) => match discriminant(&g) {
                    Ok(d) => d * g.coeff(5) * g.coeff(5),
                    Err(_) => continue,
                },
                _ => continue,
            };
            if d6 == BigInt::from(0) || (&d6 % &scale) != BigInt::from(0) {
                continue;
            }
            let disc: BigInt = (d6 / &scale).abs();
            let Ok(disc) = u64::try_from(disc) else { continue };
            if !targets.contains(&disc) {
                continue;
            }
            let curve = CurveModel::new(IntPolynomial::from_i64s(&f), hp.clone(), disc, None).unwrap();
            let fp: Vec<(i64, i64)> = (3..80u64)
                .filter(|&p| is_prime_u64(p) && disc % p != 0 && curve.is_good_prime(p))
                .take(12)
                .map(|p| {
                    let fr = curve.frobenius_poly(p).unwrap();
                    (fr.a, fr.b)
                })
                .collect();
            found.entry(disc).or_default().entry(fp).or_default().push((f, h.clone()));
        }
    }
    for (d, classes) in &found {
        println!("disc {d}: {} fingerprint classes", classes.len());
        for (fp, models) in classes {
            println!("  {:?} x{} e.g. f={:?} h={:?}", &fp[..4.min(fp.len())], models.len(), models[0].0, models[0].1);
        }
    }
}
