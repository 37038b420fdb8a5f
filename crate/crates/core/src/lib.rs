//! Mod-ℓ Galois image computations for Jacobians of genus 2 curves over Q.
//!
//! The pipeline has two halves. [`sieve`] produces a finite set of primes that
//! provably contains every prime ℓ at which the mod-ℓ representation fails to
//! surject onto GSp₄(F_ℓ). [`verify`] then removes primes for which Frobenius
//! witnesses certify surjectivity. [`oracle`] recomputes, by brute force over
//! finite groups, the constants both halves rely on.
//!
//! The crate is `no_std` and only needs `alloc`; file formats, the command
//! line and parallel drivers live in the companion `abelsurf` crate.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod fp;
pub mod frobenius;
pub mod hecke;
pub mod oracle;
pub mod sieve;
pub mod verify;

pub use arith::IntPolynomial;
pub use frobenius::{CurveModel, FrobeniusCache, FrobeniusPoly};
