//! Weight-2 modular symbols for Γ₀(N), sign +1, via Manin symbols.
//!
//! Linear algebra runs modulo a handful of 61-bit primes and the integer
//! characteristic polynomial is recovered by CRT with a symmetric lift.

use std::collections::BTreeMap;

use abelsurf_core::arith::{is_prime_u64, prime_divisors};
use abelsurf_core::IntPolynomial;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

/// Number of CRT moduli; eight 61-bit primes cover every coefficient bound met below 10^4.
const MODULUS_COUNT: usize = 8;

/// The largest primes below 2^61.
fn moduli() -> Vec<u64> {
    (0..(1u64 << 61)).rev().filter(|&m| is_prime_u64(m)).take(MODULUS_COUNT).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModSymError {
    PrimeDividesLevel { level: u64, prime: u64 },
    NotPrime(u64),
    /// The boundary kernel does not have the dimension of S₂(Γ₀(N)).
    CuspidalDimension { level: u64, found: usize, genus: usize },
    /// Old forms did not divide the cuspidal polynomial.
    OldPart { level: u64, prime: u64 },
}

impl std::fmt::Display for ModSymError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl std::error::Error for ModSymError {}

fn mul(a: u64, b: u64, q: u64) -> u64 {
    (a as u128 * b as u128 % q as u128) as u64
}

fn inv(a: u64, q: u64) -> u64 {
    abelsurf_core::arith::pow_mod(a, q - 2, q)
}

/// Genus of X₀(N).
pub fn genus_x0(n: u64) -> u64 {
    let ps = prime_divisors(n).unwrap();
    // 12 * mu as an integer
    let mut mu = n;
    for &p in &ps {
        mu = mu / p * (p + 1);
    }
    let nu2 = if n % 4 == 0 {
        0
    } else {
        ps.iter().map(|&p| if p == 2 { 1 } else if p % 4 == 1 { 2 } else { 0 }).product::<u64>()
    };
    let nu3 = if n % 9 == 0 {
        0
    } else {
        ps.iter().map(|&p| if p == 3 { 1 } else if p % 3 == 1 { 2 } else { 0 }).product::<u64>()
    };
    let cusps: u64 = (1..=n).filter(|d| n % d == 0).map(|d| totient(d.gcd(&(n / d)))).sum();
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 c
    let twelve_g = 12 + mu as i64 - 3 * nu2 as i64 - 4 * nu3 as i64 - 6 * cusps as i64;
    assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    (twelve_g / 12) as u64
}

fn totient(n: u64) -> u64 {
    let mut out = n;
    for p in prime_divisors(n).unwrap() {
        out = out / p * (p - 1);
    }
    out
}

/// Projective line over Z/N with a lookup from pairs to indices.
struct P1 {
    n: u64,
    /// `index[c * n + d]` for pairs with gcd(c, d, N) = 1.
    index: Vec<u32>,
    reps: Vec<(u64, u64)>,
}

impl P1 {
    fn new(n: u64) -> Self {
        let units: Vec<u64> = (1..=n).filter(|u| u.gcd(&n) == 1).map(|u| u % n).collect();
        let size = (n * n) as usize;
        let mut index = vec![u32::MAX; size];
        let mut reps = Vec::new();
        for c in 0..n {
            for d in 0..n {
                let slot = (c * n + d) as usize;
                if index[slot] != u32::MAX || c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                let id = reps.len() as u32;
                reps.push((c, d));
                for &u in &units {
                    let (uc, ud) = (u * c % n.max(1), u * d % n.max(1));
                    index[(uc * n + ud) as usize] = id;
                }
            }
        }
        if n == 1 {
            return Self { n, index: vec![0], reps: vec![(0, 0)] };
        }
        Self { n, index, reps }
    }

    fn len(&self) -> usize {
        self.reps.len()
    }

    fn lookup(&self, c: i64, d: i64) -> usize {
        let n = self.n as i64;
        let (c, d) = (c.rem_euclid(n) as u64, d.rem_euclid(n) as u64);
        let id = self.index[(c * self.n + d) as usize];
        debug_assert!(id != u32::MAX);
        id as usize
    }

    /// `(c : d) * [[a, b], [e, f]] = (c a + d e : c b + d f)`.
    fn act(&self, i: usize, m: [i64; 4]) -> usize {
        let (c, d) = self.reps[i];
        let (c, d) = (c as i64, d as i64);
        let n = self.n as i64;
        let [a, b, e, f] = m.map(|x| x.rem_euclid(n));
        self.lookup(c * a + d * e, c * b + d * f)
    }
}

/// Merel's matrices of determinant `p`: `a > b >= 0`, `d > c >= 0`.
pub fn heilbronn(p: u64) -> Vec<[i64; 4]> {
    let p = p as i64;
    let mut out = Vec::new();
    for a in 1..=p {
        for b in 0..a {
            // d = (p + b c) / a with d > c, which forces c < p / (a - b)
            let mut c = 0;
            while c * (a - b) < p {
                let num = p + b * c;
                if num % a == 0 {
                    let d = num / a;
                    if d > c {
                        out.push([a, b, c, d]);
                    }
                }
                c += 1;
            }
        }
    }
    out
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a.signum() * a, a.signum(), 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// `p1/q1 ~ p2/q2` under Γ₀(N), both in lowest terms with `q >= 0`.
fn cusps_equivalent((p1, q1): (i128, i128), (p2, q2): (i128, i128), n: i128) -> bool {
    let s = |p: i128, q: i128| if q <= 1 { 1 } else { ext_gcd(p.rem_euclid(q), q).1 };
    let m = ext_gcd(q1 * q2, n).0;
    (s(p1, q1) * q2 - s(p2, q2) * q1).rem_euclid(m) == 0
}

fn normalize_cusp(p: i128, q: i128) -> (i128, i128) {
    let g = ext_gcd(p, q).0.max(1);
    let (p, q) = (p / g, q / g);
    if q < 0 || (q == 0 && p < 0) {
        (-p, -q)
    } else {
        (p, q)
    }
}

/// Classes of the cusps `g(∞)` and `g(0)` for each Manin symbol, where `g`
/// lifts the symbol to SL₂(Z). With `plus`, `x` and `-x` are identified.
fn boundary_cusps(p1: &P1, plus: bool) -> (Vec<(usize, usize)>, usize) {
    let n = p1.n as i128;
    let mut reps: Vec<(i128, i128)> = Vec::new();
    let mut class = |cusp: (i128, i128)| -> usize {
        let neg = normalize_cusp(-cusp.0, cusp.1);
        if let Some(i) = reps
            .iter()
            .position(|&r| cusps_equivalent(r, cusp, n) || (plus && cusps_equivalent(r, neg, n)))
        {
            return i;
        }
        reps.push(cusp);
        reps.len() - 1
    };
    let mut out = Vec::with_capacity(p1.len());
    for &(c, d) in &p1.reps {
        let c = if c == 0 { n } else { c as i128 };
        let mut d = d as i128;
        while ext_gcd(c, d).0 != 1 {
            d += n;
        }
        // a d - b c = 1
        let (_, x, y) = ext_gcd(d, c);
        let (a, b) = (x, -y);
        let inf = class(normalize_cusp(a, c));
        let zero = class(normalize_cusp(b, d));
        out.push((inf, zero));
    }
    (out, reps.len())
}

/// Quotient of the free module on Manin symbols by the 2-term, 3-term and
/// sign relations, modulo one prime.
struct Quotient {
    q: u64,
    /// Free symbols spanning the quotient.
    basis: Vec<usize>,
    /// Coordinates of every symbol in terms of `basis`.
    coords: Vec<Vec<u64>>,
    /// Basis of the kernel of the boundary map, in `basis` coordinates.
    cuspidal: Vec<Vec<u64>>,
    /// Positions at which `cuspidal` restricts to the identity.
    cuspidal_free: Vec<usize>,
}

impl Quotient {
    fn new(p1: &P1, boundary: &(Vec<(usize, usize)>, usize), q: u64) -> Self {
        let n = p1.len();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let s = [0, -1, 1, 0];
        let t = [0, -1, 1, -1];
        let t2 = [-1, 1, -1, 0];
        let eta = [-1, 0, 0, 1];
        for x in 0..n {
            let mut r = vec![0u64; n];
            let mut add = |i: usize, c: u64| r[i] = (r[i] + c) % q;
            add(x, 1);
            add(p1.act(x, s), 1);
            rows.push(r);
            let mut r = vec![0u64; n];
            r[x] = 1;
            let y = p1.act(x, eta);
            r[y] = (r[y] + q - 1) % q;
            rows.push(r);
            let mut r = vec![0u64; n];
            for y in [x, p1.act(x, t), p1.act(x, t2)] {
                r[y] = (r[y] + 1) % q;
            }
            rows.push(r);
        }
        // reduced row echelon form
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..n {
            let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(rank, pr);
            let iv = inv(rows[rank][col], q);
            for v in rows[rank].iter_mut() {
                *v = mul(*v, iv, q);
            }
            let pivot_row = rows[rank].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != rank && row[col] != 0 {
                    let f = row[col];
                    for (k, &pv) in pivot_row.iter().enumerate().skip(col) {
                        if pv != 0 {
                            row[k] = (row[k] + q - mul(f, pv, q)) % q;
                        }
                    }
                }
            }
            pivots.push(col);
            rank += 1;
        }
        let basis: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let pos: BTreeMap<usize, usize> = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        let mut coords = vec![vec![0u64; basis.len()]; n];
        for (&b, &i) in &pos {
            coords[b][i] = 1;
        }
        for (r, &pc) in pivots.iter().enumerate() {
            // pivot symbol = - sum of the free entries of its row
            for (&b, &i) in &pos {
                coords[pc][i] = (q - rows[r][b]) % q;
            }
        }
        let (ends, cusp_count) = boundary;
        let k = basis.len();
        let mut delta = vec![vec![0u64; k]; *cusp_count];
        for (j, &b) in basis.iter().enumerate() {
            let (inf, zero) = ends[b];
            delta[inf][j] = (delta[inf][j] + 1) % q;
            delta[zero][j] = (delta[zero][j] + q - 1) % q;
        }
        let (cuspidal, cuspidal_free) = nullspace(delta, k, q);
        Self { q, basis, coords, cuspidal, cuspidal_free }
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Kernel basis of `rows` (each of length `n`), and the free column of each basis vector.
fn nullspace(mut rows: Vec<Vec<u64>>, n: usize, q: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..n {
        let Some(pr) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let iv = inv(rows[rank][col], q);
        for v in rows[rank].iter_mut() {
            *v = mul(*v, iv, q);
        }
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (k, &pv) in pivot_row.iter().enumerate() {
                    row[k] = (row[k] + q - mul(f, pv, q)) % q;
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (q - rows[r][f]) % q;
            }
            v
        })
        .collect();
    (basis, free)
}

/// Characteristic polynomial mod q (ascending coefficients) via Hessenberg form.
fn charpoly_mod(mut a: Vec<Vec<u64>>, q: u64) -> Vec<u64> {
    let n = a.len();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| a[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            a.swap(i, m);
            for row in a.iter_mut() {
                row.swap(i, m);
            }
        }
        let iv = inv(a[m][m - 1], q);
        for i in (m + 1)..n {
            let u = mul(a[i][m - 1], iv, q);
            if u == 0 {
                continue;
            }
            for j in 0..n {
                a[i][j] = (a[i][j] + q - mul(u, a[m][j], q)) % q;
            }
            for row in a.iter_mut() {
                row[m] = (row[m] + mul(u, row[i], q)) % q;
            }
        }
    }
    // p_k for the leading k x k block
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        // (x - h_kk) p_{k}
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % q;
            next[i] = (next[i] + q - mul(a[k][k], c, q)) % q;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mul(prod, a[i + 1][i], q);
            let coef = mul(prod, a[i][k], q);
            if coef == 0 {
                continue;
            }
            for (j, &c) in polys[i].iter().enumerate() {
                next[j] = (next[j] + q - mul(coef, c, q)) % q;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn crt_lift(residues: &[Vec<u64>], moduli: &[u64]) -> IntPolynomial {
    let len = residues[0].len();
    let mut modulus = BigInt::one();
    let mut vals = vec![BigInt::zero(); len];
    for (k, r) in residues.iter().enumerate() {
        let q = BigInt::from(moduli[k]);
        for (v, &c) in vals.iter_mut().zip(r) {
            // v + modulus * t = c mod q
            let diff = (BigInt::from(c) - &*v).mod_floor(&q);
            let minv = modulus.modpow(&(&q - 2u32), &q);
            let t = (diff * minv).mod_floor(&q);
            *v += &modulus * t;
        }
        modulus *= q;
    }
    let half: BigInt = &modulus / 2u32;
    IntPolynomial::new(vals.into_iter().map(|v| if v > half { v - &modulus } else { v }).collect())
}

/// Characteristic polynomials of T_p on S₂(Γ₀(N)) for each requested prime.
pub struct CuspSpace {
    level: u64,
    p1: P1,
    quotients: Vec<Quotient>,
    genus: usize,
}

impl CuspSpace {
    pub fn new(level: u64) -> Self {
        let p1 = P1::new(level);
        let boundary = boundary_cusps(&p1, true);
        let quotients = moduli().into_iter().map(|q| Quotient::new(&p1, &boundary, q)).collect();
        Self { level, p1, quotients, genus: genus_x0(level) as usize }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// Dimension of the sign +1 quotient, Eisenstein part included.
    pub fn symbol_dimension(&self) -> usize {
        self.quotients[0].dim()
    }

    pub fn hecke_charpoly(&self, p: u64) -> Result<IntPolynomial, ModSymError> {
        if !is_prime_u64(p) {
            return Err(ModSymError::NotPrime(p));
        }
        if self.level % p == 0 {
            return Err(ModSymError::PrimeDividesLevel { level: self.level, prime: p });
        }
        if self.genus == 0 {
            return Ok(IntPolynomial::one());
        }
        let hs = heilbronn(p);
        let basis = &self.quotients[0].basis;
        // integer image of each basis symbol, as symbol multiplicities
        let images: Vec<BTreeMap<usize, u64>> = basis
            .iter()
            .map(|&b| {
                let mut m = BTreeMap::new();
                for h in &hs {
                    *m.entry(self.p1.act(b, *h)).or_insert(0) += 1;
                }
                m
            })
            .collect();
        let mut residues = Vec::new();
        for quo in &self.quotients {
            let q = quo.q;
            assert_eq!(&quo.basis, basis, "quotient basis depends on the modulus");
            let k = quo.dim();
            let mut mat = vec![vec![0u64; k]; k];
            for (col, img) in images.iter().enumerate() {
                for (&sym, &count) in img {
                    let c = count % q;
                    for (row, &v) in quo.coords[sym].iter().enumerate() {
                        if v != 0 {
                            mat[row][col] = (mat[row][col] + mul(c, v, q)) % q;
                        }
                    }
                }
            }
            let g = quo.cuspidal.len();
            if g != self.genus {
                return Err(ModSymError::CuspidalDimension { level: self.level, found: g, genus: self.genus });
            }
            // restrict to the cuspidal kernel: coordinates are read off the free positions
            let mut restricted = vec![vec![0u64; g]; g];
            for (col, v) in quo.cuspidal.iter().enumerate() {
                for (row, &pos) in quo.cuspidal_free.iter().enumerate() {
                    let mut acc = 0u64;
                    for (j, &vj) in v.iter().enumerate() {
                        if vj != 0 {
                            acc = (acc + mul(mat[pos][j], vj, q)) % q;
                        }
                    }
                    restricted[row][col] = acc;
                }
            }
            residues.push(charpoly_mod(restricted, q));
        }
        let moduli: Vec<u64> = self.quotients.iter().map(|quo| quo.q).collect();
        Ok(crt_lift(&residues, &moduli))
    }
}

fn divisor_count(n: u64) -> u32 {
    (1..=n).filter(|d| n % d == 0).count() as u32
}

/// Characteristic polynomials of T_p on the new subspace of S₂(Γ₀(N)).
pub struct NewformOracle {
    spaces: BTreeMap<u64, CuspSpace>,
}

impl Default for NewformOracle {
    fn default() -> Self {
        Self::new()
    }
}

impl NewformOracle {
    pub fn new() -> Self {
        Self { spaces: BTreeMap::new() }
    }

    fn cusp(&mut self, level: u64, p: u64) -> Result<IntPolynomial, ModSymError> {
        self.spaces.entry(level).or_insert_with(|| CuspSpace::new(level)).hecke_charpoly(p)
    }

    /// Uses S₂(N) = ⊕_{M | N} new(M)^{σ₀(N/M)}.
    pub fn new_charpoly(&mut self, level: u64, p: u64) -> Result<IntPolynomial, ModSymError> {
        let mut poly = self.cusp(level, p)?;
        for m in (1..level).filter(|m| level % m == 0) {
            if genus_x0(m) == 0 {
                continue;
            }
            let old = self.new_charpoly(m, p)?.pow(divisor_count(level / m));
            poly = poly.exact_div(&old).map_err(|_| ModSymError::OldPart { level, prime: p })?;
        }
        Ok(poly)
    }

    /// Dimension of the new subspace.
    pub fn new_dimension(level: u64) -> usize {
        let mut d = genus_x0(level) as i64;
        for m in (1..level).filter(|m| level % m == 0) {
            d -= Self::new_dimension(m) as i64 * divisor_count(level / m) as i64;
        }
        d as usize
    }
}
