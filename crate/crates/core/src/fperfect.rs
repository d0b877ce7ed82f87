//! F-perfect numbers and the searches around them.
//!
//! `n` is F-perfect when its proper divisors satisfy `sum d^2 = 3n`. The module
//! searches the more general `sum_{d | n, d < n} d^a = b n`, reports which
//! parts of a search are backed by a proven size bound, and builds
//! certificates `n = F(2k-1) F(2k+1)` from pairs of Fibonacci primes.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{Pow, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{
    factorize, fib, is_prime_with, proper_power_sum, sigma_small, Factorization,
    PrimalityConfig, PrimalityResult, Verdict,
};
use crate::markov::MarkovPair;
use crate::sieve::scan_factored;
use crate::{Completeness, Error, Result};

/// Certificates below this size are checked by summing squares of divisors.
pub const DIRECT_CHECK_CAP: u64 = 1_000_000_000_000_000_000;

/// `n` with `sum_{d | n, d < n} d^a = b n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub a: u32,
    #[serde(with = "crate::serde_dec")]
    pub b: BigUint,
    #[serde(with = "crate::serde_dec")]
    pub n: BigUint,
    pub factorization: Factorization,
}

pub fn is_f_perfect(n: &BigUint) -> Result<bool> {
    if n.is_zero() {
        return Err(Error::domain("F-perfect is defined for n >= 1"));
    }
    Ok(proper_power_sum(2, n)? == n * 3u32)
}

enum Quotient {
    Small(u128),
    Big(BigUint),
}

impl Quotient {
    fn to_biguint(&self) -> BigUint {
        match self {
            Quotient::Small(v) => (*v).into(),
            Quotient::Big(v) => v.clone(),
        }
    }
}

/// `(sigma_a(n) - n^a) / n` when the division is exact.
fn proper_quotient(a: u32, n: u64, factors: &[(u64, u32)]) -> Option<Quotient> {
    let narrow = sigma_small(a, factors)
        .zip((n as u128).checked_pow(a))
        .map(|(s, na)| s - na);
    match narrow {
        Some(s) => (s % n as u128 == 0).then(|| Quotient::Small(s / n as u128)),
        None => {
            let s: BigUint = factors
                .iter()
                .map(|&(p, e)| crate::arith::prime_power_sigma(a, &p.into(), e))
                .product::<BigUint>()
                - Pow::pow(BigUint::from(n), a);
            (&s % n).is_zero().then(|| Quotient::Big(s / n))
        }
    }
}

fn scan_for_multiplier(a: u32, b: u64, lo: u64, hi: u64) -> Vec<SolutionRecord> {
    scan_factored(lo, hi, |n, f| match proper_quotient(a, n, f)? {
        Quotient::Small(q) if q == b as u128 => Some(SolutionRecord {
            a,
            b: b.into(),
            n: n.into(),
            factorization: Factorization::from_small(n, f),
        }),
        _ => None,
    })
}

/// All `n <= limit` with `sigma_2(n) - n^2 = b n`, ascending.
pub fn search_square_sums(b: u64, limit: u64) -> Result<Vec<SolutionRecord>> {
    if b == 0 {
        return Err(Error::domain("b must be positive"));
    }
    Ok(scan_for_multiplier(2, b, 2, limit))
}

/// Largest `n` any solution of `sigma_a(n) - n^a = b n` can have when `a >= 3`:
/// such `n` has at least two distinct primes and then `b > 2 sqrt(n)`.
pub fn power_sum_cutoff(b: u64) -> u64 {
    ((b as u128 * b as u128) / 4).min(u64::MAX as u128) as u64
}

/// All `n <= min(limit, b^2 / 4)` with `sigma_a(n) - n^a = b n` for `a >= 3`.
///
/// No solution lies above `b^2 / 4`, so the result is complete once
/// `limit >= power_sum_cutoff(b)`.
pub fn search_power_sums(a: u32, b: u64, limit: u64) -> Result<Vec<SolutionRecord>> {
    if a < 3 {
        return Err(Error::domain(format!("exponent a = {a} must be at least 3")));
    }
    if b == 0 {
        return Err(Error::domain("b must be positive"));
    }
    Ok(scan_for_multiplier(a, b, 2, limit.min(power_sum_cutoff(b))))
}

pub fn power_sum_completeness(b: u64, limit: u64) -> Completeness {
    if limit >= power_sum_cutoff(b) {
        Completeness::Certified
    } else {
        Completeness::UpToLimit
    }
}

/// A value `b` attained by `sum_{d | n, d < n} d^a = b n`, with its least witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiplierWitness {
    #[serde(with = "crate::serde_dec")]
    pub b: BigUint,
    #[serde(with = "crate::serde_dec::word")]
    pub n: u64,
}

/// Every `b >= 1` attained by some `n <= n_limit`, ascending in `b`.
pub fn attainable_multipliers(a: u32, n_limit: u64) -> Result<Vec<MultiplierWitness>> {
    if a < 2 {
        return Err(Error::domain(format!("exponent a = {a} must be at least 2")));
    }
    let hits = scan_factored(2, n_limit, |n, f| {
        proper_quotient(a, n, f).map(|q| (q.to_biguint(), n))
    });
    let mut least: BTreeMap<BigUint, u64> = BTreeMap::new();
    for (b, n) in hits {
        least.entry(b).or_insert(n);
    }
    Ok(least
        .into_iter()
        .map(|(b, n)| MultiplierWitness { b, n })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branch {
    /// `n = p^alpha`.
    PrimePower,
    /// At least three distinct primes.
    ThreeOrMorePrimes,
    /// `n = p q`, `p < q`.
    TwoPrimesSquarefree,
    /// `n = p^alpha q^beta` with `alpha + beta >= 3`.
    TwoPrimesMixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchStatus {
    pub branch: Branch,
    pub completeness: Completeness,
    pub reason: String,
}

/// Size constraints on solutions of `sigma_2(n) - n^2 = b n`, split by the shape of `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SquareSumBounds {
    pub b: u64,
    /// Solutions with three or more distinct primes satisfy `n <= (b/3)^3`.
    #[serde(with = "crate::serde_dec")]
    pub three_prime_cutoff: BigUint,
    /// Solutions `p1^a1 p2^a2` satisfy `p1^(a1-1) p2^(a2-1) <= b/2`.
    pub two_prime_exponent_cap: u64,
}

/// Smallest integer with three distinct prime factors.
const SMALLEST_THREE_PRIME: u64 = 30;

pub fn square_sum_bounds(b: u64) -> SquareSumBounds {
    let b3 = BigUint::from(b).pow(3u32);
    SquareSumBounds {
        b,
        three_prime_cutoff: b3 / 27u32,
        two_prime_exponent_cap: b / 2,
    }
}

impl SquareSumBounds {
    /// Per-branch completeness of a scan that covered `n <= limit`.
    pub fn branches(&self, limit: u64) -> Vec<BranchStatus> {
        let cutoff = &self.three_prime_cutoff;
        let three = if *cutoff < BigUint::from(SMALLEST_THREE_PRIME) {
            BranchStatus {
                branch: Branch::ThreeOrMorePrimes,
                completeness: Completeness::Certified,
                reason: format!(
                    "n <= (b/3)^3 = {cutoff} is below 30, the least n with three primes: empty"
                ),
            }
        } else if BigUint::from(limit) >= *cutoff {
            BranchStatus {
                branch: Branch::ThreeOrMorePrimes,
                completeness: Completeness::Certified,
                reason: format!("scan limit {limit} covers the cutoff n <= (b/3)^3 = {cutoff}"),
            }
        } else {
            BranchStatus {
                branch: Branch::ThreeOrMorePrimes,
                completeness: Completeness::UpToLimit,
                reason: format!("cutoff n <= (b/3)^3 = {cutoff} exceeds scan limit {limit}"),
            }
        };
        let squarefree = if self.b == 3 {
            BranchStatus {
                branch: Branch::TwoPrimesSquarefree,
                completeness: Completeness::UpToLimit,
                reason: "1 + p^2 + q^2 = 3pq: solutions are Fibonacci prime pairs F(2k-1), F(2k+1)"
                    .into(),
            }
        } else {
            BranchStatus {
                branch: Branch::TwoPrimesSquarefree,
                completeness: Completeness::Certified,
                reason: format!("1 + x^2 + y^2 = {} x y has no positive solutions", self.b),
            }
        };
        let cap = self.two_prime_exponent_cap;
        let mixed = if cap <= 1 {
            BranchStatus {
                branch: Branch::TwoPrimesMixed,
                completeness: Completeness::Certified,
                reason: format!(
                    "2 p1^(a1-1) p2^(a2-1) <= {} forces a1 = a2 = 1: empty",
                    self.b
                ),
            }
        } else {
            BranchStatus {
                branch: Branch::TwoPrimesMixed,
                completeness: Completeness::UpToLimit,
                reason: format!(
                    "p1^(a1-1) p2^(a2-1) <= {cap} bounds exponents but no closed-form n bound is claimed"
                ),
            }
        };
        vec![
            BranchStatus {
                branch: Branch::PrimePower,
                completeness: Completeness::Certified,
                reason: "proper divisor sum of p^a is 1 mod p, never a multiple of p^a: empty"
                    .into(),
            },
            three,
            squarefree,
            mixed,
        ]
    }

    pub fn completeness(&self, limit: u64) -> Completeness {
        self.branches(limit)
            .iter()
            .fold(Completeness::Certified, |acc, s| acc.and(s.completeness))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateCheck {
    /// `sigma_2(n) - n^2 = 3n` evaluated from the factorization.
    DirectSigma,
    /// `1 + F(2k-1)^2 + F(2k+1)^2 = 3 F(2k-1) F(2k+1)` checked exactly.
    MarkovIdentity,
}

/// `n = F(2k-1) F(2k+1)` with both factors (probably) prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FPerfectCertificate {
    #[serde(with = "crate::serde_dec")]
    pub n: BigUint,
    pub k: u64,
    #[serde(with = "crate::serde_dec")]
    pub f_lo: BigUint,
    #[serde(with = "crate::serde_dec")]
    pub f_hi: BigUint,
    pub lo_primality: PrimalityResult,
    pub hi_primality: PrimalityResult,
    pub digits: usize,
    pub check: CertificateCheck,
}

impl FPerfectCertificate {
    pub fn lo_index(&self) -> u64 {
        2 * self.k - 1
    }

    pub fn hi_index(&self) -> u64 {
        2 * self.k + 1
    }

    pub fn is_provable(&self) -> bool {
        self.lo_primality.verdict == Verdict::ProvablePrime
            && self.hi_primality.verdict == Verdict::ProvablePrime
    }
}

/// Certificates for every `k <= max_k` where `F(2k-1)` and `F(2k+1)` are both non-composite.
pub fn generate_certificates(max_k: u64, config: &PrimalityConfig) -> Vec<FPerfectCertificate> {
    // F(1), F(3), ..., F(2 max_k + 1)
    let odd: Vec<(BigUint, PrimalityResult)> = (0..=max_k)
        .into_par_iter()
        .map(|j| {
            let f = fib(2 * j + 1);
            let r = is_prime_with(&f, config);
            (f, r)
        })
        .collect();
    (1..=max_k)
        .into_par_iter()
        .filter_map(|k| {
            let (lo, lo_r) = &odd[(k - 1) as usize];
            let (hi, hi_r) = &odd[k as usize];
            if lo_r.is_composite() || hi_r.is_composite() {
                return None;
            }
            let n = lo * hi;
            let check = if n.to_u64().is_some_and(|v| v < DIRECT_CHECK_CAP) {
                if !is_f_perfect(&n).ok()? {
                    return None;
                }
                CertificateCheck::DirectSigma
            } else {
                MarkovPair::new(3, lo.clone(), hi.clone()).ok()?;
                CertificateCheck::MarkovIdentity
            };
            Some(FPerfectCertificate {
                digits: n.to_str_radix(10).len(),
                n,
                k,
                f_lo: lo.clone(),
                f_hi: hi.clone(),
                lo_primality: *lo_r,
                hi_primality: *hi_r,
                check,
            })
        })
        .collect()
}

/// Checks the factor shape `n = F(2k-1) F(2k+1)` with both factors prime; returns `k`.
pub fn fibonacci_prime_shape(n: &BigUint, config: &PrimalityConfig) -> Result<Option<u64>> {
    let f = factorize(n)?;
    let [lo, hi] = f.factors() else {
        return Ok(None);
    };
    if lo.exponent != 1 || hi.exponent != 1 {
        return Ok(None);
    }
    let (Some(i), Some(j)) = (
        crate::arith::is_fibonacci(&lo.prime),
        crate::arith::is_fibonacci(&hi.prime),
    ) else {
        return Ok(None);
    };
    // F(1) = F(2) = 1 is never a factor here, so indices are unambiguous
    let primes_ok = !is_prime_with(&lo.prime, config).is_composite()
        && !is_prime_with(&hi.prime, config).is_composite();
    Ok((primes_ok && i % 2 == 1 && j == i + 2).then_some(j / 2))
}
