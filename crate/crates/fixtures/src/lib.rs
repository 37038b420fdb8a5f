//! Offline generators for test fixtures.
//!
//! [`modsym`] computes Hecke characteristic polynomials on weight-2 newforms
//! for Γ₀(N) from Manin symbols, so the bundled Hecke table can be rebuilt
//! without network access.

pub mod modsym;
