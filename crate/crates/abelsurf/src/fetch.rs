//! Optional client for Hecke characteristic polynomials served by the
//! public modular forms database, with an on-disk cache.
//!
//! For a level `d` and prime `p` the client asks, in order:
//!
//! 1. `/api/mf_newspaces/?level=i{d}&weight=i2&char_order=i1&_fields=dim`
//!    for the newspace dimension. No row means the level is unknown.
//! 2. `/api/mf_newforms/?level=i{d}&weight=i2&char_order=i1&_fields=hecke_orbit_code,dim`
//!    for the Galois orbits of newforms.
//! 3. `/api/mf_hecke_charpolys/?hecke_orbit_code=i{c}&p=i{p}&_fields=charpoly_factorization`
//!    for each orbit; the factors are ascending integer coefficient lists.
//!
//! Every request adds `_format=json`; the payload's `data` field holds the rows.
//! The answer is the product of the orbit factors, checked for degree against
//! the dimension. Cached answers live in `hecke_{d}_{p}.txt` under the cache
//! directory and are served without touching the network.

use std::path::{Path, PathBuf};
use std::time::Duration;

use abelsurf_core::hecke::{has_trivial_newspace, HeckeError, HeckeTable};
use abelsurf_core::IntPolynomial;
use num_bigint::BigInt;
use serde_json::Value;

use crate::polytext::{format_poly, parse_poly};

/// Environment variable overriding the endpoint base URL.
pub const ENDPOINT_ENV: &str = "ABELSURF_LMFDB_URL";
pub const DEFAULT_ENDPOINT: &str = "https://www.lmfdb.org";

#[derive(Debug, thiserror::Error)]
pub enum FetchError {
    #[error("request to {url} failed: {message}")]
    Network { url: String, message: String },
    #[error("level {0} is unknown to the remote database")]
    MissingLevel(u64),
    #[error("no data for level {level} at p = {prime}")]
    MissingPrime { level: u64, prime: u64 },
    #[error("malformed response from {url}: {reason}")]
    Malformed { url: String, reason: String },
    #[error("cache {path}: {message}")]
    Cache { path: String, message: String },
    #[error(transparent)]
    Invalid(#[from] HeckeError),
}

pub struct Fetcher {
    endpoint: String,
    cache_dir: PathBuf,
    agent: ureq::Agent,
    offline: bool,
}

impl Fetcher {
    pub fn new(endpoint: impl Into<String>, cache_dir: impl Into<PathBuf>) -> Self {
        let agent: ureq::Agent =
            ureq::Agent::config_builder().timeout_global(Some(Duration::from_secs(60))).build().into();
        Self {
            endpoint: endpoint.into().trim_end_matches('/').to_string(),
            cache_dir: cache_dir.into(),
            agent,
            offline: false,
        }
    }

    /// Endpoint from [`ENDPOINT_ENV`], falling back to [`DEFAULT_ENDPOINT`].
    pub fn from_env(cache_dir: impl Into<PathBuf>) -> Self {
        let endpoint = std::env::var(ENDPOINT_ENV).unwrap_or_else(|_| DEFAULT_ENDPOINT.to_string());
        Self::new(endpoint, cache_dir)
    }

    /// Serve from the cache only; misses become errors.
    pub fn offline(mut self) -> Self {
        self.offline = true;
        self
    }

    pub fn endpoint(&self) -> &str {
        &self.endpoint
    }

    fn cache_path(&self, level: u64, prime: u64) -> PathBuf {
        self.cache_dir.join(format!("hecke_{level}_{prime}.txt"))
    }

    fn read_cache(&self, path: &Path) -> Result<Option<IntPolynomial>, FetchError> {
        let cache_err = |message: String| FetchError::Cache { path: path.display().to_string(), message };
        match std::fs::read_to_string(path) {
            Ok(text) => parse_poly(text.trim()).map(Some).map_err(|e| cache_err(e.to_string())),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(cache_err(e.to_string())),
        }
    }

    fn write_cache(&self, path: &Path, poly: &IntPolynomial) -> Result<(), FetchError> {
        let cache_err = |e: std::io::Error| FetchError::Cache { path: path.display().to_string(), message: e.to_string() };
        std::fs::create_dir_all(&self.cache_dir).map_err(cache_err)?;
        // identical content from concurrent writers, so last rename wins harmlessly
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, format!("{}\n", format_poly(poly))).map_err(cache_err)?;
        std::fs::rename(&tmp, path).map_err(cache_err)
    }

    /// Charpoly of `T_prime` on the weight 2 newspace of level `level`.
    pub fn fetch(&self, level: u64, prime: u64) -> Result<IntPolynomial, FetchError> {
        if has_trivial_newspace(level) {
            return Ok(IntPolynomial::one());
        }
        let path = self.cache_path(level, prime);
        if let Some(p) = self.read_cache(&path)? {
            return Ok(p);
        }
        if self.offline {
            return Err(FetchError::MissingPrime { level, prime });
        }
        let poly = self.fetch_remote(level, prime)?;
        // validates monicity and the Ramanujan bound before caching
        HeckeTable::new("fetch").insert(level, prime, poly.clone())?;
        self.write_cache(&path, &poly)?;
        Ok(poly)
    }

    fn get_rows(&self, url: &str) -> Result<Vec<Value>, FetchError> {
        let mut resp = self
            .agent
            .get(url)
            .call()
            .map_err(|e| FetchError::Network { url: url.to_string(), message: e.to_string() })?;
        let body = resp
            .body_mut()
            .read_to_string()
            .map_err(|e| FetchError::Network { url: url.to_string(), message: e.to_string() })?;
        let json: Value = serde_json::from_str(&body)
            .map_err(|e| FetchError::Malformed { url: url.to_string(), reason: e.to_string() })?;
        match json.get("data") {
            Some(Value::Array(rows)) => Ok(rows.clone()),
            _ => Err(FetchError::Malformed { url: url.to_string(), reason: "no data array".to_string() }),
        }
    }

    fn fetch_remote(&self, level: u64, prime: u64) -> Result<IntPolynomial, FetchError> {
        let space = format!(
            "{}/api/mf_newspaces/?level=i{level}&weight=i2&char_order=i1&_fields=dim&_format=json",
            self.endpoint
        );
        let rows = self.get_rows(&space)?;
        let dim = match rows.first() {
            None => return Err(FetchError::MissingLevel(level)),
            Some(row) => field_u64(row, "dim", &space)?,
        };
        if dim == 0 {
            return Ok(IntPolynomial::one());
        }
        let forms = format!(
            "{}/api/mf_newforms/?level=i{level}&weight=i2&char_order=i1&_fields=hecke_orbit_code,dim&_format=json",
            self.endpoint
        );
        let orbits = self.get_rows(&forms)?;
        let mut product = IntPolynomial::one();
        let mut total = 0;
        for orbit in &orbits {
            let code = field_u64(orbit, "hecke_orbit_code", &forms)?;
            let odim = field_u64(orbit, "dim", &forms)?;
            let url = format!(
                "{}/api/mf_hecke_charpolys/?hecke_orbit_code=i{code}&p=i{prime}&_fields=charpoly_factorization&_format=json",
                self.endpoint
            );
            let rows = self.get_rows(&url)?;
            let row = rows.first().ok_or(FetchError::MissingPrime { level, prime })?;
            let factors = row
                .get("charpoly_factorization")
                .and_then(Value::as_array)
                .ok_or_else(|| malformed(&url, "charpoly_factorization is not a list"))?;
            let mut orbit_poly = IntPolynomial::one();
            for factor in factors {
                orbit_poly = &orbit_poly * &coefficient_list(factor, &url)?;
            }
            if orbit_poly.degree() != Some(odim as usize) {
                return Err(malformed(&url, &format!("orbit factor has degree {:?}, orbit dimension is {odim}", orbit_poly.degree())));
            }
            product = &product * &orbit_poly;
            total += odim;
        }
        if total != dim {
            return Err(malformed(&forms, &format!("orbit dimensions sum to {total}, newspace dimension is {dim}")));
        }
        Ok(product)
    }
}

fn malformed(url: &str, reason: &str) -> FetchError {
    FetchError::Malformed { url: url.to_string(), reason: reason.to_string() }
}

fn field_u64(row: &Value, key: &str, url: &str) -> Result<u64, FetchError> {
    row.get(key).and_then(Value::as_u64).ok_or_else(|| malformed(url, &format!("missing integer field {key}")))
}

fn coefficient_list(v: &Value, url: &str) -> Result<IntPolynomial, FetchError> {
    let items = v.as_array().ok_or_else(|| malformed(url, "factor is not a list"))?;
    let coeffs = items
        .iter()
        .map(|c| match c {
            Value::Number(n) => n.to_string().parse::<BigInt>().ok(),
            Value::String(s) => s.parse::<BigInt>().ok(),
            _ => None,
        })
        .collect::<Option<Vec<BigInt>>>()
        .ok_or_else(|| malformed(url, "non-integer coefficient"))?;
    Ok(IntPolynomial::new(coeffs))
}

/// Fetches every `(level, prime)` entry the table lacks.
pub fn fill_table(fetcher: &Fetcher, table: &mut HeckeTable, levels: &[u64], aux: &[u64]) -> Result<(), FetchError> {
    for &d in levels {
        for &p in aux {
            if d % p == 0 || table.get(d, p).is_some() {
                continue;
            }
            let poly = fetcher.fetch(d, p)?;
            table.insert(d, p, poly)?;
        }
    }
    Ok(())
}
