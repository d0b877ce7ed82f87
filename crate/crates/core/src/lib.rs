//! Computational toolkit for F-perfect numbers and their neighbours.
//!
//! An *F-perfect* number is a positive integer `n` whose proper divisors
//! satisfy `sum d^2 = 3n`, i.e. `sigma_2(n) - n^2 = 3n`. Every such `n` is a
//! product `F(2k-1) * F(2k+1)` of two Fibonacci primes. This crate provides the
//! machinery to search for, certify and cross-check that characterization:
//!
//! - [`arith`]: big-integer primality, factorization, divisor power sums and
//!   Fibonacci/Lucas numbers.
//! - [`contfrac`]: continued fractions of square roots and the negative Pell
//!   equations `x^2 - N y^2 = -1` and `x^2 - d y^2 = -4`.
//! - [`markov`]: solutions of `1 + x^2 + y^2 = k x y`.
//! - [`fperfect`]: the F-perfect predicate, range searches and certificates.
//! - [`sigma3`]: scans for `n | sigma_3(n)` and its relation to even perfect
//!   numbers.

pub mod arith;
pub mod contfrac;
mod error;
pub mod fperfect;
pub mod markov;
pub mod serde_dec;
pub mod sigma3;
pub mod sieve;

pub use error::{Error, Result};

/// Arbitrary-precision non-negative integer used for every operand.
pub type Natural = num_bigint::BigUint;

/// How far a search result can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Completeness {
    /// A proven cutoff or argument covers every `n`, not just the scanned range.
    Certified,
    /// Exhaustive only up to the scan limit.
    UpToLimit,
}

impl Completeness {
    pub fn and(self, other: Completeness) -> Completeness {
        if self == Completeness::Certified && other == Completeness::Certified {
            Completeness::Certified
        } else {
            Completeness::UpToLimit
        }
    }
}
