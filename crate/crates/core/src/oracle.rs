//! Brute-force group computations over F_ℓ that re-derive the constants the
//! verification tests rely on.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rand_core::RngCore;

use crate::arith::{inv_mod, is_prime_u64};
use crate::fp::FpPoly;
use crate::verify::Exceptional;

pub type Mat4 = [[u32; 4]; 4];

/// Safety cap on projective closures.
pub const CLOSURE_CAP: usize = 1_000_000;

/// `<v, w> = v1 w4 + v2 w3 - v3 w2 - v4 w1`.
pub const STANDARD_FORM: [[i64; 4]; 4] = [[0, 0, 0, 1], [0, 0, 1, 0], [0, -1, 0, 0], [-1, 0, 0, 0]];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("{0} is not an odd prime")]
    BadModulus(u64),
    #[error("generator {0} is not invertible")]
    SingularGenerator(usize),
    #[error("the generators preserve {solutions} families of forms (dimension of the first: {dimension}), expected exactly one line")]
    NoCommonForm { solutions: usize, dimension: usize },
    #[error("the preserved form is degenerate")]
    DegenerateForm,
    #[error("group closure exceeded {0} elements")]
    CapExceeded(usize),
    #[error("matrix does not scale the form")]
    NotSimilitude,
}

pub fn standard_form(ell: u64) -> Mat4 {
    let mut j = [[0u32; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            j[i][k] = STANDARD_FORM[i][k].rem_euclid(ell as i64) as u32;
        }
    }
    j
}

pub fn mat_from_i64(m: [[i64; 4]; 4], ell: u64) -> Mat4 {
    let mut out = [[0u32; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            out[i][k] = m[i][k].rem_euclid(ell as i64) as u32;
        }
    }
    out
}

pub fn mat_mul(a: &Mat4, b: &Mat4, ell: u64) -> Mat4 {
    let mut out = [[0u32; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            let mut s = 0u64;
            for j in 0..4 {
                s += a[i][j] as u64 * b[j][k] as u64;
            }
            out[i][k] = (s % ell) as u32;
        }
    }
    out
}

pub fn transpose(a: &Mat4) -> Mat4 {
    let mut out = [[0u32; 4]; 4];
    for i in 0..4 {
        for k in 0..4 {
            out[i][k] = a[k][i];
        }
    }
    out
}

fn scale(a: &Mat4, c: u64, ell: u64) -> Mat4 {
    let mut out = *a;
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = (*x as u64 * c % ell) as u32;
        }
    }
    out
}

/// Determinant by Gaussian elimination.
pub fn det(a: &Mat4, ell: u64) -> u32 {
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| x as u64).collect()).collect();
    let mut d = 1u64;
    for col in 0..4 {
        let Some(piv) = (col..4).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            d = (ell - d) % ell;
        }
        d = d * m[col][col] % ell;
        let inv = inv_mod(m[col][col], ell).unwrap();
        for r in (col + 1)..4 {
            let factor = m[r][col] * inv % ell;
            for c in col..4 {
                m[r][c] = (m[r][c] + ell - factor * m[col][c] % ell) % ell;
            }
        }
    }
    d as u32
}

/// Coefficients `(e1, e2, e3, e4)` with charpoly `t^4 - e1 t^3 + e2 t^2 - e3 t + e4`.
pub fn charpoly_coeffs(a: &Mat4, ell: u64) -> [u32; 4] {
    let l = ell;
    let x = |i: usize, j: usize| a[i][j] as u64;
    let e1 = (0..4).map(|i| x(i, i)).sum::<u64>() % l;
    let mut e2 = 0u64;
    for i in 0..4 {
        for j in (i + 1)..4 {
            e2 += (x(i, i) * x(j, j) + (l * l - x(i, j) * x(j, i))) % l;
        }
    }
    let mut e3 = 0u64;
    for skip in 0..4 {
        let idx: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |r: usize, c: usize| x(idx[r], idx[c]);
        let minor = m(0, 0) * ((m(1, 1) * m(2, 2) + l * l - m(1, 2) * m(2, 1)) % l)
            + (l - m(0, 1)) * ((m(1, 0) * m(2, 2) + l * l - m(1, 2) * m(2, 0)) % l)
            + m(0, 2) * ((m(1, 0) * m(2, 1) + l * l - m(1, 1) * m(2, 0)) % l);
        e3 += minor % l;
    }
    [e1 as u32, (e2 % l) as u32, (e3 % l) as u32, det(a, ell)]
}

/// Scalar `λ` with `M^T J M = λ J`, if any.
pub fn multiplier(m: &Mat4, form: &Mat4, ell: u64) -> Option<u32> {
    let lhs = mat_mul(&mat_mul(&transpose(m), form, ell), m, ell);
    let (i, k) = (0..16).map(|n| (n / 4, n % 4)).find(|&(i, k)| form[i][k] != 0)?;
    let lambda = lhs[i][k] as u64 * inv_mod(form[i][k] as u64, ell)? % ell;
    (lambda != 0 && lhs == scale(form, lambda, ell)).then_some(lambda as u32)
}

/// Scale so the first nonzero entry (row-major) is 1.
pub fn canonical(m: &Mat4, ell: u64) -> Mat4 {
    match m.iter().flatten().find(|&&x| x != 0) {
        None => *m,
        Some(&lead) => scale(m, inv_mod(lead as u64, ell).unwrap(), ell),
    }
}

/// Skew forms are stored as the six upper entries `(01, 02, 03, 12, 13, 23)`.
const SKEW_INDEX: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn skew_from(x: &[u32; 6], ell: u64) -> Mat4 {
    let mut j = [[0u32; 4]; 4];
    for (k, &(r, c)) in SKEW_INDEX.iter().enumerate() {
        j[r][c] = x[k];
        j[c][r] = ((ell - x[k] as u64) % ell) as u32;
    }
    j
}

/// Basis of the nullspace of `rows` (each of length `n`) over F_ℓ.
fn nullspace(rows: &[Vec<u64>], n: usize, ell: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        let inv = inv_mod(m[r][c], ell).unwrap();
        for x in m[r].iter_mut() {
            *x = *x * inv % ell;
        }
        for i in 0..m.len() {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for k in 0..n {
                    m[i][k] = (m[i][k] + ell - f * m[r][k] % ell) % ell;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (ell - m[row][f]) % ell;
            }
            v
        })
        .collect()
}

/// Rows of the linear map `J -> G^T J G - μ J` on skew forms.
fn similitude_rows(g: &Mat4, mu: u64, ell: u64) -> Vec<Vec<u64>> {
    let gt = transpose(g);
    let mut cols = Vec::new();
    for k in 0..6 {
        let mut e = [0u32; 6];
        e[k] = 1;
        let ek = skew_from(&e, ell);
        let img = mat_mul(&mat_mul(&gt, &ek, ell), g, ell);
        cols.push(
            SKEW_INDEX
                .iter()
                .map(|&(r, c)| (img[r][c] as u64 + ell - mu * ek[r][c] as u64 % ell) % ell)
                .collect::<Vec<u64>>(),
        );
    }
    (0..6).map(|r| (0..6).map(|c| cols[c][r]).collect()).collect()
}

/// The unique (up to scalar) nondegenerate skew form scaled by every generator.
pub fn invariant_form(generators: &[Mat4], ell: u64) -> Result<Mat4, OracleError> {
    check_odd_prime(ell)?;
    for (i, g) in generators.iter().enumerate() {
        if det(g, ell) == 0 {
            return Err(OracleError::SingularGenerator(i));
        }
    }
    let mut leaves: Vec<Vec<Vec<u64>>> = Vec::new();
    let mut stack: Vec<(usize, Vec<Vec<u64>>)> = vec![(0, Vec::new())];
    while let Some((depth, rows)) = stack.pop() {
        if depth == generators.len() {
            let ns = nullspace(&rows, 6, ell);
            if !ns.is_empty() {
                leaves.push(ns);
            }
            continue;
        }
        for mu in 1..ell {
            let mut next = rows.clone();
            next.extend(similitude_rows(&generators[depth], mu, ell));
            if !nullspace(&next, 6, ell).is_empty() {
                stack.push((depth + 1, next));
            }
        }
    }
    if leaves.len() != 1 || leaves[0].len() != 1 {
        return Err(OracleError::NoCommonForm {
            solutions: leaves.len(),
            dimension: leaves.first().map_or(0, |l| l.len()),
        });
    }
    let v = &leaves[0][0];
    let x = [v[0] as u32, v[1] as u32, v[2] as u32, v[3] as u32, v[4] as u32, v[5] as u32];
    let j = canonical(&skew_from(&x, ell), ell);
    if det(&j, ell) == 0 {
        return Err(OracleError::DegenerateForm);
    }
    Ok(j)
}

fn check_odd_prime(ell: u64) -> Result<(), OracleError> {
    if ell == 2 || !is_prime_u64(ell) || ell > u16::MAX as u64 {
        return Err(OracleError::BadModulus(ell));
    }
    Ok(())
}

/// Closure of the generators in PGL₄(F_ℓ), as canonical representatives.
pub fn generate_projective_group(generators: &[Mat4], ell: u64) -> Result<BTreeSet<Mat4>, OracleError> {
    generate_projective_group_capped(generators, ell, CLOSURE_CAP)
}

pub fn generate_projective_group_capped(
    generators: &[Mat4],
    ell: u64,
    cap: usize,
) -> Result<BTreeSet<Mat4>, OracleError> {
    check_odd_prime(ell)?;
    for (i, g) in generators.iter().enumerate() {
        if det(g, ell) == 0 {
            return Err(OracleError::SingularGenerator(i));
        }
    }
    let gens: Vec<Mat4> = generators.iter().map(|g| canonical(g, ell)).collect();
    let mut identity = [[0u32; 4]; 4];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = 1;
    }
    let mut seen = BTreeSet::new();
    seen.insert(identity);
    let mut queue = VecDeque::from([identity]);
    while let Some(m) = queue.pop_front() {
        for g in &gens {
            let next = canonical(&mat_mul(&m, g, ell), ell);
            if seen.insert(next) {
                if seen.len() > cap {
                    return Err(OracleError::CapExceeded(cap));
                }
                queue.push_back(next);
            }
        }
    }
    Ok(seen)
}

/// `{(tr^2 / mult, mid / mult)}` over the group, with `mult` measured against `form`.
pub fn compute_c_set(group: &BTreeSet<Mat4>, form: &Mat4, ell: u64) -> Result<BTreeSet<(u32, u32)>, OracleError> {
    let mut out = BTreeSet::new();
    for m in group {
        let lambda = multiplier(m, form, ell).ok_or(OracleError::NotSimilitude)? as u64;
        let inv = inv_mod(lambda, ell).unwrap();
        let [e1, e2, _, _] = charpoly_coeffs(m, ell);
        let e1 = e1 as u64;
        out.insert(((e1 * e1 % ell * inv % ell) as u32, (e2 as u64 * inv % ell) as u32));
    }
    Ok(out)
}

/// A listed set of integer pairs reduced modulo ℓ.
pub fn reduce_pairs(pairs: &[(i64, i64)], ell: u64) -> BTreeSet<(u32, u32)> {
    pairs
        .iter()
        .map(|&(x, y)| (x.rem_euclid(ell as i64) as u32, y.rem_euclid(ell as i64) as u32))
        .collect()
}

/// Which square root to use for the parameter of a generator row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootChoice {
    Least,
    Other,
}

fn pick_root(ell: u64, pred: impl Fn(u64) -> bool, choice: RootChoice) -> Option<u64> {
    let mut roots = (0..ell).filter(|&x| pred(x));
    match choice {
        RootChoice::Least => roots.next(),
        RootChoice::Other => {
            let first = roots.next();
            roots.next().or(first)
        }
    }
}

/// Generators of the exceptional subgroups that exist at ℓ.
pub fn exceptional_generators(ell: u64, choice: RootChoice) -> Vec<(Exceptional, Vec<Mat4>)> {
    let m = |rows: [[i64; 4]; 4]| mat_from_i64(rows, ell);
    let mut out = Vec::new();
    let t1 = [[1, 0, 0, -1], [0, 1, -1, 0], [0, 1, 1, 0], [1, 0, 0, 1]];
    let t3 = [[1, 0, 0, -1], [0, 1, 1, 0], [0, -1, 1, 0], [1, 0, 0, 1]];
    let t4 = [[1, 0, 1, 0], [0, 1, 0, 1], [-1, 0, 1, 0], [0, -1, 0, 1]];
    let sq = |x: u64| x * x % ell;
    if ell % 8 == 5 {
        let b = pick_root(ell, |x| sq(x) == ell - 1, choice).unwrap() as i64;
        let t2 = [[1, 0, 0, b], [0, 1, b, 0], [0, b, 1, 0], [b, 0, 0, 1]];
        out.push((Exceptional::G1920, vec![m(t1), m(t2), m(t3), m(t4)]));
    }
    if ell % 8 == 3 {
        let b = pick_root(ell, |x| sq(x) == (ell - 2) % ell, choice).unwrap() as i64;
        let t2 = [[0, 0, 0, b], [0, 0, b, 0], [0, b, 2, 0], [b, 0, 0, 2]];
        out.push((Exceptional::G1920, vec![m(t1), m(t2), m(t3), m(t4)]));
    }
    if ell % 12 == 7 {
        let a = pick_root(ell, |x| (sq(x) + x + 1) % ell == 0, choice).unwrap() as i64;
        let c = -a - 1;
        out.push((
            Exceptional::G720,
            vec![
                m([[a, 0, 0, 0], [0, a, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
                m([[a, 0, 0, 0], [0, 1, 0, 0], [0, 0, a, 0], [0, 0, 0, 1]]),
                m([[a, 0, c, a + 1], [0, a, c, c], [c, c, -1, 0], [a + 1, c, 0, -1]]),
                m([[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]),
            ],
        ));
    }
    if ell % 12 == 5 {
        let b = pick_root(ell, |x| sq(x) == ell - 1, choice).unwrap() as i64;
        out.push((
            Exceptional::G720,
            vec![
                m([[-1, 0, 0, -1], [0, -1, -1, 0], [0, 1, 0, 0], [1, 0, 0, 0]]),
                m([[0, 0, 0, 1], [0, -1, -1, 0], [0, 1, 0, 0], [-1, 0, 0, -1]]),
                m([
                    [-b - 1, b, 2 * b, -2 * b + 1],
                    [b, b - 1, 2 * b + 1, 2 * b],
                    [b, b - 1, -b - 2, -b],
                    [-b - 1, b, -b, b - 2],
                ]),
                m([[0, -b, -2 * b, 0], [b, 0, 0, 2 * b], [-2 * b, 0, 0, -b], [0, 2 * b, b, 0]]),
            ],
        ));
    }
    if ell == 7 {
        out.push((
            Exceptional::G5040,
            vec![
                m([[2, 0, 0, 0], [0, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
                m([[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 1]]),
                m([[6, 0, 5, 2], [0, 6, 5, 5], [5, 5, 4, 0], [2, 5, 0, 4]]),
                m([[0, 6, 0, 0], [1, 0, 0, 0], [0, 0, 0, 6], [0, 0, 1, 0]]),
                m([[4, 6, 0, 0], [6, 6, 0, 0], [0, 0, 4, 1], [0, 0, 1, 6]]),
            ],
        ));
    }
    out
}

/// Projective order of each exceptional subgroup.
pub fn expected_projective_order(kind: Exceptional) -> usize {
    match kind {
        Exceptional::G1920 => 1920,
        Exceptional::G720 => 720,
        Exceptional::G5040 => 5040,
    }
}

/// Per-charpoly classification used by the enumeration and sampling counts.
struct CharpolyTable {
    ell: u64,
    /// Indexed by `e1 + ℓ e2 + ℓ^2 e3 + ℓ^3 e4`.
    irreducible: Vec<bool>,
    simple_root: Vec<bool>,
    gamma_forbidden: BTreeSet<(u32, u32)>,
}

impl CharpolyTable {
    fn new(ell: u64) -> Self {
        let l = ell as usize;
        let n = l * l * l * l;
        let mut irreducible = vec![false; n];
        let mut simple_root = vec![false; n];
        for idx in 0..n {
            let e = [idx % l, idx / l % l, idx / (l * l) % l, idx / (l * l * l)];
            let c = |x: usize, neg: bool| if neg { (l - x) % l } else { x } as u64;
            let q = FpPoly::new(ell, vec![c(e[3], false), c(e[2], true), c(e[1], false), c(e[0], true), 1]);
            match q.factor_degrees() {
                Some(d) => irreducible[idx] = d == [4],
                None => {
                    // not squarefree: irreducible is impossible
                }
            }
            let dq = q.derivative();
            simple_root[idx] = (0..ell).any(|r| q.eval(r) == 0 && dq.eval(r) != 0);
        }
        let mut gamma_forbidden = BTreeSet::new();
        for kind in [Exceptional::G1920, Exceptional::G720, Exceptional::G5040] {
            if !kind.excluded_for(ell) {
                gamma_forbidden.extend(reduce_pairs(kind.pairs(), ell));
            }
        }
        Self { ell, irreducible, simple_root, gamma_forbidden }
    }

    fn classify(&self, e: [u32; 4], lambda: u32, counts: &mut GroupCounts) {
        let l = self.ell as usize;
        let idx = e[0] as usize + l * e[1] as usize + l * l * e[2] as usize + l * l * l * e[3] as usize;
        counts.order += 1;
        let irr = self.irreducible[idx];
        if irr {
            counts.alpha += 1;
            if e[0] == 0 {
                counts.trace_zero_irreducible += 1;
            }
        }
        if e[0] != 0 && self.simple_root[idx] {
            counts.beta += 1;
        }
        let inv = inv_mod(lambda as u64, self.ell).unwrap();
        let x = (e[0] as u64 * e[0] as u64 % self.ell * inv % self.ell) as u32;
        let y = (e[1] as u64 * inv % self.ell) as u32;
        if !self.gamma_forbidden.contains(&(x, y)) {
            counts.gamma += 1;
        }
    }
}

/// Tallies over a set of GSp₄ elements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GroupCounts {
    pub order: u64,
    /// Irreducible characteristic polynomial.
    pub alpha: u64,
    /// Nonzero trace and a simple linear factor.
    pub beta: u64,
    /// Avoids every applicable exceptional pair set.
    pub gamma: u64,
    /// Irreducible with trace zero (must stay 0).
    pub trace_zero_irreducible: u64,
}

impl GroupCounts {
    pub fn merge(&mut self, o: &GroupCounts) {
        self.order += o.order;
        self.alpha += o.alpha;
        self.beta += o.beta;
        self.gamma += o.gamma;
        self.trace_zero_irreducible += o.trace_zero_irreducible;
    }
}

/// Number of first-column choices; partitions of `0..first_column_count(ℓ)`
/// can be enumerated independently and merged.
pub fn first_column_count(ell: u64) -> usize {
    (ell * ell * ell * ell) as usize
}

/// Scan all 4×4 matrices over F_ℓ whose first column index lies in `first_columns`,
/// keeping those with `M^T J M = λ J`, `λ != 0`, for the standard form.
///
/// The four columns are chosen in turn and a branch is abandoned as soon as a
/// pairing between already chosen columns is wrong.
pub fn enumerate_gsp4(ell: u64, first_columns: core::ops::Range<usize>) -> Result<GroupCounts, OracleError> {
    check_odd_prime(ell)?;
    let l = ell as usize;
    let n = first_column_count(ell);
    let vecs: Vec<[u32; 4]> =
        (0..n).map(|i| [(i % l) as u32, (i / l % l) as u32, (i / (l * l) % l) as u32, (i / (l * l * l)) as u32]).collect();
    let pair = |v: &[u32; 4], w: &[u32; 4]| -> u32 {
        let s = v[0] as u64 * w[3] as u64 + v[1] as u64 * w[2] as u64 + 2 * ell * ell
            - v[2] as u64 * w[1] as u64
            - v[3] as u64 * w[0] as u64;
        (s % ell) as u32
    };
    let table = CharpolyTable::new(ell);
    let mut counts = GroupCounts::default();
    for i1 in first_columns {
        let c1 = &vecs[i1];
        let orth1: Vec<usize> = (0..n).filter(|&j| pair(c1, &vecs[j]) == 0).collect();
        for &i2 in &orth1 {
            let c2 = &vecs[i2];
            for &i3 in &orth1 {
                let c3 = &vecs[i3];
                let lambda = pair(c2, c3);
                if lambda == 0 {
                    continue;
                }
                for c4 in &vecs {
                    if pair(c1, c4) != lambda || pair(c2, c4) != 0 || pair(c3, c4) != 0 {
                        continue;
                    }
                    let mut m = [[0u32; 4]; 4];
                    for r in 0..4 {
                        m[r] = [c1[r], c2[r], c3[r], c4[r]];
                    }
                    table.classify(charpoly_coeffs(&m, ell), lambda, &mut counts);
                }
            }
        }
    }
    Ok(counts)
}

/// Whole-group tallies at ℓ = 3 on the calling thread.
pub fn enumerate_gsp4_f3() -> GroupCounts {
    enumerate_gsp4(3, 0..first_column_count(3)).expect("3 is an odd prime")
}

/// `|GSp₄(F_q)| = q^4 (q^4 - 1)(q^2 - 1)(q - 1)`.
pub fn gsp4_order(q: u64) -> u128 {
    let q = q as u128;
    q.pow(4) * (q.pow(4) - 1) * (q * q - 1) * (q - 1)
}

fn uniform(rng: &mut impl RngCore, ell: u64) -> u32 {
    let l = ell as u32;
    let zone = u32::MAX - u32::MAX % l;
    loop {
        let x = rng.next_u32();
        if x < zone {
            return x % l;
        }
    }
}

fn std_pair(v: &[u64; 4], w: &[u64; 4], ell: u64) -> u64 {
    (v[0] * w[3] + v[1] * w[2] + 2 * ell * ell - v[2] * w[1] - v[3] * w[0]) % ell
}

/// Uniform element of GSp₄(F_ℓ) for the standard form, with its multiplier.
///
/// Draws a random symplectic basis column by column, then scales the last
/// two columns by a random multiplier.
pub fn random_gsp4(ell: u64, rng: &mut impl RngCore) -> (Mat4, u32) {
    let rand_vec = |rng: &mut _| -> [u64; 4] { core::array::from_fn(|_| uniform(rng, ell) as u64) };
    let scaled = |v: &[u64; 4], c: u64| -> [u64; 4] { core::array::from_fn(|i| v[i] * c % ell) };
    let axpy = |v: &[u64; 4], a: u64, w: &[u64; 4]| -> [u64; 4] { core::array::from_fn(|i| (v[i] + ell - a * w[i] % ell) % ell) };
    let c1 = loop {
        let v = rand_vec(rng);
        if v.iter().any(|&x| x != 0) {
            break v;
        }
    };
    let c4 = loop {
        let v = rand_vec(rng);
        let k = std_pair(&c1, &v, ell);
        if k != 0 {
            break scaled(&v, inv_mod(k, ell).unwrap());
        }
    };
    // w = v - <v, c4> c1 + <v, c1> c4 is orthogonal to c1 and c4
    let project = |v: &[u64; 4]| -> [u64; 4] {
        let a = std_pair(v, &c4, ell);
        let b = std_pair(v, &c1, ell);
        let w = axpy(v, a, &c1);
        axpy(&w, (ell - b) % ell, &c4)
    };
    let c2 = loop {
        let v = project(&rand_vec(rng));
        if v.iter().any(|&x| x != 0) {
            break v;
        }
    };
    let c3 = loop {
        let v = project(&rand_vec(rng));
        let k = std_pair(&c2, &v, ell);
        if k != 0 {
            break scaled(&v, inv_mod(k, ell).unwrap());
        }
    };
    let lambda = loop {
        let x = uniform(rng, ell);
        if x != 0 {
            break x as u64;
        }
    };
    let c3 = scaled(&c3, lambda);
    let c4 = scaled(&c4, lambda);
    let mut m = [[0u32; 4]; 4];
    for r in 0..4 {
        m[r] = [c1[r] as u32, c2[r] as u32, c3[r] as u32, c4[r] as u32];
    }
    (m, lambda as u32)
}

/// Tallies over `n` uniform samples.
pub fn sample_gsp4(ell: u64, n: u64, rng: &mut impl RngCore) -> Result<GroupCounts, OracleError> {
    check_odd_prime(ell)?;
    let table = CharpolyTable::new(ell);
    let mut counts = GroupCounts::default();
    for _ in 0..n {
        let (m, lambda) = random_gsp4(ell, rng);
        table.classify(charpoly_coeffs(&m, ell), lambda, &mut counts);
    }
    Ok(counts)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Proportion of elements with irreducible characteristic polynomial.
pub fn alpha(ell: u64) -> BigRational {
    let l = ell as i64;
    ratio(1, 4) - ratio(1, 2 * (l * l + 1))
}

/// Proportion with nonzero trace and a simple linear factor.
pub fn beta(ell: u64) -> BigRational {
    let l = ell as i64;
    ratio(3, 8) - ratio(3, 4 * (l - 1)) + ratio(1, 2 * (l - 1) * (l - 1))
}

/// Lower bound for the proportion avoiding every exceptional pair set.
pub fn gamma_lower_bound(ell: u64) -> BigRational {
    let l = ell as i64;
    BigRational::one() - ratio(3 * l, l * l + 1)
}

/// `(1 - α)^n + (1 - β)^n + (9/10)^n`.
pub fn failure_probability_bound(n: u32, ell: u64) -> BigRational {
    let one = BigRational::one();
    (&one - alpha(ell)).pow(n) + (&one - beta(ell)).pow(n) + ratio(9, 10).pow(n)
}



#[cfg(test)]
mod exceptional_tests {
    use super::*;

    fn check(ell: u64, kind: Exceptional, choice: RootChoice) {
        let rows = exceptional_generators(ell, choice);
        let (_, gens) = rows.iter().find(|(k, _)| *k == kind).expect("row exists");
        let form = invariant_form(gens, ell).unwrap();
        let group = generate_projective_group(gens, ell).unwrap();
        assert_eq!(group.len(), expected_projective_order(kind), "ell={ell} {kind:?}");
        let c = compute_c_set(&group, &form, ell).unwrap();
        assert_eq!(c, reduce_pairs(kind.pairs(), ell), "ell={ell} {kind:?}");
    }

    #[test]
    fn orders_and_pair_sets_1920() {
        for ell in [3, 5, 11, 13, 19, 29] {
            check(ell, Exceptional::G1920, RootChoice::Least);
            check(ell, Exceptional::G1920, RootChoice::Other);
        }
    }

    #[test]
    fn orders_and_pair_sets_720() {
        for ell in [5, 7, 17, 19, 29, 31] {
            check(ell, Exceptional::G720, RootChoice::Least);
            check(ell, Exceptional::G720, RootChoice::Other);
        }
    }

    #[test]
    fn order_and_pair_set_5040() {
        check(7, Exceptional::G5040, RootChoice::Least);
    }

    #[test]
    fn whole_group_over_f3() {
        let c = enumerate_gsp4_f3();
        assert_eq!(c.order as u128, gsp4_order(3));
        assert_eq!(c.alpha * 5, c.order);
        assert_eq!(c.beta * 8, c.order);
        assert_eq!(c.trace_zero_irreducible, 0);
        // split enumeration agrees with the single pass
        let mut parts = GroupCounts::default();
        for r in [0..30, 30..50, 50..81] {
            parts.merge(&enumerate_gsp4(3, r).unwrap());
        }
        assert_eq!(parts, c);
        assert_eq!(c.gamma * 10, c.order);
        let lower = gamma_lower_bound(3) * BigRational::from_integer(BigInt::from(c.order));
        assert!(BigRational::from_integer(BigInt::from(c.gamma)) >= lower);
    }

    #[test]
    fn random_elements_are_similitudes() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for ell in [3u64, 5, 7, 13, 101] {
            let j = standard_form(ell);
            for _ in 0..200 {
                let (m, lambda) = random_gsp4(ell, &mut rng);
                assert_eq!(multiplier(&m, &j, ell), Some(lambda));
            }
        }
    }

    #[test]
    fn sampled_proportions_near_exact_at_three() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let n = 40_000u64;
        let c = sample_gsp4(3, n, &mut rng).unwrap();
        let close = |count: u64, expect: f64| ((count as f64 / n as f64) - expect).abs() < 0.01;
        assert!(close(c.alpha, 0.2), "{c:?}");
        assert!(close(c.beta, 0.125), "{c:?}");
        assert!(close(c.gamma, 0.1), "{c:?}");
        assert_eq!(c.trace_zero_irreducible, 0);
    }
}
