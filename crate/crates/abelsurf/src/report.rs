//! The JSON report emitted per curve.

use std::collections::BTreeMap;

use abelsurf_core::sieve::{QuadOutcome, SieveError, SieveReport};
use abelsurf_core::verify::{S6Verdict, VerifyReport, Witness};
use serde::Serialize;

use crate::curves::CurveRecord;

/// Bumped whenever a field changes meaning.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub curve: CurveRecord,
    pub bound: u64,
    pub aux_bound: u64,
    /// `None` when the sieve did not finish.
    pub possibly_nonsurjective: Option<Vec<u64>>,
    pub likely_nonsurjective: Option<Vec<u64>>,
    /// Reasons each candidate is in the sieve output.
    pub provenance: BTreeMap<u64, Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sieve: Option<SieveSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub galois_s6: Option<S6Summary>,
    /// Largest prime used by a Frobenius test.
    pub largest_witness: Option<u64>,
    /// Candidates ℓ with ℓ | P_p(1) at every good p below the bound, as a
    /// rational ℓ-torsion point would force.
    pub torsion_compatible: Vec<u64>,
    /// `ℓ -> test -> prime or automatic reason`; only with `--verbose`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<BTreeMap<u64, BTreeMap<String, WitnessEntry>>>,
    pub errors: Vec<ErrorEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SieveSummary {
    pub m_odd: String,
    pub m_related: String,
    pub m_selfdual: BTreeMap<u64, String>,
    /// Keyed by the character's discriminant; `null` when no auxiliary prime
    /// constrains the character.
    pub m_quad: BTreeMap<i64, Option<String>>,
    pub auxiliary_primes_used: usize,
}

impl SieveSummary {
    pub fn new(s: &SieveReport) -> Self {
        Self {
            m_odd: s.m_odd.to_string(),
            m_related: s.m_related.to_string(),
            m_selfdual: s.m_selfdual.iter().map(|(d, m)| (*d, m.to_string())).collect(),
            m_quad: s
                .m_quad
                .iter()
                .map(|(c, o)| {
                    let v = match o {
                        QuadOutcome::Constrained(m) => Some(m.to_string()),
                        QuadOutcome::Unconstrained => None,
                    };
                    (c.discriminant(), v)
                })
                .collect(),
            auxiliary_primes_used: s.auxiliary_primes_used.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct S6Summary {
    pub is_s6: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Primes whose factorization patterns certify the full symmetric group.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<BTreeMap<String, serde_json::Value>>,
}

impl S6Summary {
    pub fn new(v: &S6Verdict) -> Self {
        match v {
            S6Verdict::Yes(c) => {
                let mut cert = BTreeMap::new();
                cert.insert("six_cycle".to_string(), serde_json::json!(c.six_cycle));
                cert.insert("irreducibility_primes".to_string(), serde_json::json!(c.irreducibility_primes));
                cert.insert("five_cycle".to_string(), serde_json::json!(c.five_cycle));
                cert.insert("transposition".to_string(), serde_json::json!(c.transposition));
                cert.insert("three_cycle".to_string(), serde_json::json!(c.three_cycle));
                cert.insert("odd_permutation".to_string(), serde_json::json!(c.odd_permutation));
                Self { is_s6: true, reason: None, certificate: Some(cert) }
            }
            S6Verdict::Inconclusive(r) => Self { is_s6: false, reason: Some(r.to_string()), certificate: None },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum WitnessEntry {
    Prime(u64),
    Auto(String),
}

impl From<Witness> for WitnessEntry {
    fn from(w: Witness) -> Self {
        match w {
            Witness::Prime(p) => WitnessEntry::Prime(p),
            Witness::Auto(r) => WitnessEntry::Auto(format!("auto: {r}")),
        }
    }
}

pub fn witness_map(v: &VerifyReport) -> BTreeMap<u64, BTreeMap<String, WitnessEntry>> {
    v.states
        .iter()
        .map(|(l, st)| (*l, st.witnesses.iter().map(|(f, w)| (f.name().to_string(), (*w).into())).collect()))
        .collect()
}

/// Coarse error classes; each maps to a process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ErrorKind {
    Parse,
    MissingHeckeData,
    EndomorphismSuspected,
    Fetch,
    Internal,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::MissingHeckeData | ErrorKind::Fetch => 3,
            ErrorKind::EndomorphismSuspected => 4,
            ErrorKind::Internal => 1,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorEntry {
    pub kind: ErrorKind,
    pub message: String,
    /// Sub-sieves stuck at zero, for `EndomorphismSuspected`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sites: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
}

impl ErrorEntry {
    pub fn new(kind: ErrorKind, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), sites: Vec::new(), level: None, prime: None }
    }

    pub fn from_sieve(e: &SieveError) -> Self {
        let mut entry = Self::new(ErrorKind::Internal, e.to_string());
        match e {
            SieveError::MissingHeckeData(m) => {
                entry.kind = ErrorKind::MissingHeckeData;
                entry.level = Some(m.level);
                entry.prime = Some(m.prime);
            }
            SieveError::EndomorphismSuspected(sites) => {
                entry.kind = ErrorKind::EndomorphismSuspected;
                entry.sites = sites.iter().map(|s| s.to_string()).collect();
            }
            _ => {}
        }
        entry
    }
}

impl Report {
    pub fn empty(curve: CurveRecord, bound: u64, aux_bound: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            curve,
            bound,
            aux_bound,
            possibly_nonsurjective: None,
            likely_nonsurjective: None,
            provenance: BTreeMap::new(),
            sieve: None,
            galois_s6: None,
            largest_witness: None,
            torsion_compatible: Vec::new(),
            witnesses: None,
            errors: Vec::new(),
            timing_ms: None,
        }
    }

    /// Exit code of the most severe error, or 0.
    pub fn exit_code(&self) -> i32 {
        self.errors.iter().map(|e| e.kind).min().map_or(0, ErrorKind::exit_code)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}
