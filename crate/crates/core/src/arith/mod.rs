//! Exact integer and polynomial arithmetic shared by every other module.
//!
//! All polynomial work is done over arbitrary-precision integers: the
//! quantities fed to the sieves reach hundreds of digits.

mod numtheory;
mod poly;
mod resultant;

pub use numtheory::{
    big_prime_divisors, factorize, inv_mod, is_prime_u64, mul_mod, multiplicative_order,
    pow_mod, prime_divisors, primes_below, radical, square_part,
};
pub use poly::IntPolynomial;
pub use resultant::{discriminant, power_roots, resultant};

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ArithError {
    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,
    #[error("constant polynomial not allowed here")]
    ConstantPolynomial,
    #[error("polynomial must be monic")]
    NotMonic,
    #[error("exponent must be positive")]
    ZeroExponent,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("{value} is not invertible modulo {modulus}")]
    NotCoprime { value: i64, modulus: u64 },
    #[error("inexact division")]
    InexactDivision,
    #[error("could not factor {0}")]
    Unfactored(String),
}
