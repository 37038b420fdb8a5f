//! Brute-force group checks behind `abelsurf oracle`.

use abelsurf_core::arith::primes_below;
use abelsurf_core::oracle::{
    alpha, beta, compute_c_set, enumerate_gsp4, exceptional_generators, expected_projective_order, first_column_count,
    gamma_lower_bound, generate_projective_group, gsp4_order, invariant_form, reduce_pairs, sample_gsp4, GroupCounts,
    RootChoice,
};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub expected: String,
    pub observed: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, expected: impl ToString, observed: impl ToString) -> Self {
        Self { name: name.into(), passed, expected: expected.to_string(), observed: observed.to_string() }
    }

    fn equal<T: PartialEq + ToString>(name: impl Into<String>, expected: T, observed: T) -> Self {
        Self::new(name, expected == observed, expected, observed)
    }
}

fn as_f64(r: &num_rational::BigRational) -> f64 {
    r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap()
}

/// Whole GSp₄(F₃), split over `partitions` first-column ranges run in parallel.
pub fn enumerate_f3(partitions: usize) -> GroupCounts {
    let n = first_column_count(3);
    let k = partitions.clamp(1, n);
    let parts: Vec<GroupCounts> = (0..k)
        .into_par_iter()
        .map(|i| enumerate_gsp4(3, i * n / k..(i + 1) * n / k).expect("3 is an odd prime"))
        .collect();
    let mut total = GroupCounts::default();
    for p in &parts {
        total.merge(p);
    }
    total
}

pub fn enumerate_f3_checks(partitions: usize) -> Vec<Check> {
    let c = enumerate_f3(partitions);
    let order = BigInt::from(c.order);
    let frac = |k: u64| num_rational::BigRational::new(BigInt::from(k), order.clone());
    vec![
        Check::equal("gsp4_f3_order", gsp4_order(3), c.order as u128),
        Check::equal("gsp4_f3_alpha", alpha(3).to_string(), frac(c.alpha).to_string()),
        Check::equal("gsp4_f3_beta", beta(3).to_string(), frac(c.beta).to_string()),
        Check::new(
            "gsp4_f3_gamma_lower_bound",
            frac(c.gamma) >= gamma_lower_bound(3),
            format!(">= {}", gamma_lower_bound(3)),
            frac(c.gamma),
        ),
        Check::equal("gsp4_f3_trace_zero_reducible", 0, c.trace_zero_irreducible),
    ]
}

/// Projective orders and pair sets of every exceptional subgroup at each odd ℓ ≤ `ell_max`.
pub fn c_set_checks(ell_max: u64) -> Vec<Check> {
    let ells: Vec<u64> = primes_below(ell_max + 1).into_iter().filter(|&l| l > 2).collect();
    ells.par_iter()
        .flat_map_iter(|&ell| {
            let mut out = Vec::new();
            for (kind, gens) in exceptional_generators(ell, RootChoice::Least) {
                let name = format!("{kind:?}_at_{ell}");
                let form = match invariant_form(&gens, ell) {
                    Ok(f) => f,
                    Err(e) => {
                        out.push(Check::new(format!("{name}_form"), false, "unique invariant form", e));
                        continue;
                    }
                };
                let group = match generate_projective_group(&gens, ell) {
                    Ok(g) => g,
                    Err(e) => {
                        out.push(Check::new(format!("{name}_order"), false, expected_projective_order(kind), e));
                        continue;
                    }
                };
                out.push(Check::equal(format!("{name}_order"), expected_projective_order(kind), group.len()));
                let expected = reduce_pairs(kind.pairs(), ell);
                match compute_c_set(&group, &form, ell) {
                    Ok(c) => out.push(Check::equal(format!("{name}_pairs"), format!("{expected:?}"), format!("{c:?}"))),
                    Err(e) => out.push(Check::new(format!("{name}_pairs"), false, format!("{expected:?}"), e)),
                }
            }
            out
        })
        .collect()
}

/// Sampled proportions against the exact closed forms, allowing three standard deviations.
pub fn sample_checks(ell: u64, n: u64, seed: u64) -> Vec<Check> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let c = match sample_gsp4(ell, n, &mut rng) {
        Ok(c) => c,
        Err(e) => return vec![Check::new(format!("sample_{ell}"), false, "odd prime", e)],
    };
    let sigma = |p: f64| 3.0 * (p * (1.0 - p) / n as f64).sqrt();
    let near = |name: &str, count: u64, p: f64| {
        let obs = count as f64 / n as f64;
        Check::new(format!("sample_{ell}_{name}"), (obs - p).abs() <= sigma(p), format!("{p:.6} +- {:.6}", sigma(p)), format!("{obs:.6}"))
    };
    let g = as_f64(&gamma_lower_bound(ell));
    let obs_g = c.gamma as f64 / n as f64;
    vec![
        near("alpha", c.alpha, as_f64(&alpha(ell))),
        near("beta", c.beta, as_f64(&beta(ell))),
        Check::new(format!("sample_{ell}_gamma"), obs_g >= g - sigma(g), format!(">= {g:.6} - {:.6}", sigma(g)), format!("{obs_g:.6}")),
        Check::equal(format!("sample_{ell}_trace_zero_reducible"), 0, c.trace_zero_irreducible),
    ]
}
