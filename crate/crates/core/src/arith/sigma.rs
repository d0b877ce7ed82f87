//! Divisor power sums `sigma_a(n) = sum_{d | n} d^a`.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

use super::factor::{factorize_with, FactorConfig, Factorization};
use crate::{Error, Result};

fn check_exponent(a: u32) -> Result<()> {
    if a == 0 {
        Err(Error::domain("divisor power exponent must be positive"))
    } else {
        Ok(())
    }
}

/// `1 + p^a + p^2a + ... + p^ea`, summed term by term.
pub fn prime_power_sigma(a: u32, p: &BigUint, e: u32) -> BigUint {
    let step = Pow::pow(p, a);
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for _ in 0..e {
        term *= &step;
        sum += &term;
    }
    sum
}

pub fn sigma_from_factorization(a: u32, f: &Factorization) -> BigUint {
    f.factors()
        .iter()
        .map(|pp| prime_power_sigma(a, &pp.prime, pp.exponent))
        .product()
}

pub fn sigma(a: u32, n: &BigUint) -> Result<BigUint> {
    sigma_with(a, n, &FactorConfig::default())
}

pub fn sigma_with(a: u32, n: &BigUint, config: &FactorConfig) -> Result<BigUint> {
    check_exponent(a)?;
    if n.is_zero() {
        return Err(Error::domain("sigma is defined for n >= 1"));
    }
    if n.is_one() {
        return Ok(BigUint::one());
    }
    Ok(sigma_from_factorization(a, &factorize_with(n, config)?))
}

/// `sigma_a(n) - n^a`, the power sum over proper divisors.
pub fn proper_power_sum(a: u32, n: &BigUint) -> Result<BigUint> {
    proper_power_sum_with(a, n, &FactorConfig::default())
}

pub fn proper_power_sum_with(a: u32, n: &BigUint, config: &FactorConfig) -> Result<BigUint> {
    Ok(sigma_with(a, n, config)? - Pow::pow(n, a))
}

/// `sigma_a` from machine-word factors, `None` on `u128` overflow.
pub fn sigma_small(a: u32, factors: &[(u64, u32)]) -> Option<u128> {
    let mut total: u128 = 1;
    for &(p, e) in factors {
        let step = (p as u128).checked_pow(a)?;
        let mut term: u128 = 1;
        let mut sum: u128 = 1;
        for _ in 0..e {
            term = term.checked_mul(step)?;
            sum = sum.checked_add(term)?;
        }
        total = total.checked_mul(sum)?;
    }
    Some(total)
}

/// `sigma_a(n) mod m` from machine-word factors.
pub fn sigma_mod(a: u32, factors: &[(u64, u32)], m: u64) -> u64 {
    let m128 = m as u128;
    let mut total: u128 = 1 % m128;
    for &(p, e) in factors {
        let mut step: u128 = 1 % m128;
        let pm = p as u128 % m128;
        for _ in 0..a {
            step = step * pm % m128;
        }
        let mut term: u128 = 1 % m128;
        let mut sum: u128 = 1 % m128;
        for _ in 0..e {
            term = term * step % m128;
            sum = (sum + term) % m128;
        }
        total = total * sum % m128;
    }
    total as u64
}
