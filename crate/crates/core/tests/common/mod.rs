#![allow(dead_code)]

use abelsurf_core::{CurveModel, IntPolynomial};

/// `(label, f, h, conductor)` with ascending coefficients.
pub const CURVES: [(&str, &[i64], &[i64], u64); 6] = [
    ("249.a.249.1", &[0, 1, 1], &[1, 0, 0, 1], 249),
    ("47089.a.1295541485872879.1", &[45, -69, 85, -48, 23, 1], &[1, 1], 47089),
    ("169.a.169.1", &[0, 0, 0, 0, 1, 1], &[1, 1, 0, 1], 169),
    ("743.a.743.1", &[0, 0, -1, -1, 1, -1], &[1, 0, 1, 1], 743),
    ("976.a.999424.1", &[0, 0, -1, 2, 0, -2, 1], &[1, 1], 976),
    ("529.a.529.1", &[-7, 10, -11, 2, 2, -8, 1], &[], 529),
];

pub fn curve(i: usize) -> CurveModel {
    let (label, f, h, n) = CURVES[i];
    CurveModel::new(IntPolynomial::from_i64s(f), IntPolynomial::from_i64s(h), n, Some(label.into())).unwrap()
}

/// F_q for q = p or p^2, elements `a + b s` with `s^2 = nonresidue`.
#[derive(Clone, Copy)]
pub struct Field {
    pub p: u64,
    pub r: u32,
    nonresidue: u64,
}

pub type Elt = (u64, u64);

impl Field {
    pub fn new(p: u64, r: u32) -> Self {
        let squares: Vec<u64> = (0..p).map(|x| x * x % p).collect();
        let nonresidue = (1..p).find(|c| !squares.contains(c)).unwrap();
        Self { p, r, nonresidue }
    }

    pub fn elements(&self) -> Vec<Elt> {
        let p = self.p;
        if self.r == 1 {
            (0..p).map(|a| (a, 0)).collect()
        } else {
            (0..p * p).map(|i| (i % p, i / p)).collect()
        }
    }

    pub fn from_int(&self, c: i64) -> Elt {
        (c.rem_euclid(self.p as i64) as u64, 0)
    }

    pub fn add(&self, x: Elt, y: Elt) -> Elt {
        ((x.0 + y.0) % self.p, (x.1 + y.1) % self.p)
    }

    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        let p = self.p;
        ((x.0 * y.0 + x.1 * y.1 % p * self.nonresidue) % p, (x.0 * y.1 + x.1 * y.0) % p)
    }

    pub fn eval(&self, coeffs: &[i64], x: Elt) -> Elt {
        coeffs.iter().rev().fold((0, 0), |acc, &c| self.add(self.mul(acc, x), self.from_int(c)))
    }
}

/// Points on the smooth model of `y^2 + h y = f` over F_{p^r}, by trying every `(x, y)`.
///
/// Points at infinity are the solutions of `Y^2 + h_3 Y = f_6` in the weighted
/// projective chart `Z = 0`.
pub fn naive_count(f: &[i64], h: &[i64], p: u64, r: u32) -> u64 {
    let k = Field::new(p, r);
    let elts = k.elements();
    let neg = |x: Elt| ((p - x.0) % p, (p - x.1) % p);
    let solutions = |a: Elt, b: Elt| -> u64 {
        // y^2 + a y - b = 0
        elts.iter().filter(|&&y| k.add(k.add(k.mul(y, y), k.mul(a, y)), neg(b)) == (0, 0)).count() as u64
    };
    let mut n = 0;
    for &x in &elts {
        n += solutions(k.eval(h, x), k.eval(f, x));
    }
    let top = |c: &[i64], i: usize| k.from_int(c.get(i).copied().unwrap_or(0));
    n + solutions(top(h, 3), top(f, 6))
}
