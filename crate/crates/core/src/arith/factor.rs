//! Prime factorization: trial division, then Brent's variant of Pollard rho.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::primality::{is_prime_u64, is_prime_with, mul_mod, PrimalityConfig};
use crate::sieve::primes_up_to;
use crate::{Error, Result};

const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorConfig {
    /// Largest trial divisor.
    pub trial_bound: u64,
    /// Total rho iterations allowed before giving up.
    pub rho_budget: u64,
    /// Seeds the rho polynomial constants; 0 selects the default sequence.
    pub seed: u64,
    pub primality: PrimalityConfig,
}

impl Default for FactorConfig {
    fn default() -> Self {
        FactorConfig {
            trial_bound: DEFAULT_TRIAL_BOUND,
            rho_budget: 20_000_000,
            seed: 0,
            primality: PrimalityConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePower {
    #[serde(with = "crate::serde_dec")]
    pub prime: BigUint,
    pub exponent: u32,
}

/// Prime factorization of some `n >= 2`, primes strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factorization {
    #[serde(with = "crate::serde_dec")]
    n: BigUint,
    factors: Vec<PrimePower>,
}

impl Factorization {
    /// Builds from machine-word factors, e.g. from a sieve. Caller guarantees primality and order.
    pub fn from_small(n: u64, factors: &[(u64, u32)]) -> Self {
        debug_assert_eq!(factors.iter().map(|&(p, e)| p.pow(e)).product::<u64>(), n);
        Factorization {
            n: n.into(),
            factors: factors
                .iter()
                .map(|&(p, e)| PrimePower {
                    prime: p.into(),
                    exponent: e,
                })
                .collect(),
        }
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[PrimePower] {
        &self.factors
    }

    pub fn distinct_prime_count(&self) -> usize {
        self.factors.len()
    }

    pub fn total_prime_count(&self) -> u32 {
        self.factors.iter().map(|f| f.exponent).sum()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|f| f.exponent == 1)
    }
}

fn trial_primes(bound: u64) -> std::borrow::Cow<'static, [u64]> {
    static DEFAULT: OnceLock<Vec<u64>> = OnceLock::new();
    if bound == DEFAULT_TRIAL_BOUND {
        DEFAULT.get_or_init(|| primes_up_to(DEFAULT_TRIAL_BOUND)).as_slice().into()
    } else {
        primes_up_to(bound).into()
    }
}

pub fn factorize(n: &BigUint) -> Result<Factorization> {
    factorize_with(n, &FactorConfig::default())
}

pub fn factorize_with(n: &BigUint, config: &FactorConfig) -> Result<Factorization> {
    if *n < BigUint::from(2u32) {
        return Err(Error::domain(format!("cannot factorize {n}: need n >= 2")));
    }
    let mut found: Vec<BigUint> = Vec::new();
    let mut rest = n.clone();
    let primes = trial_primes(config.trial_bound);
    let mut exhausted = true;
    let mut small = rest.to_u64();
    for &p in primes.iter() {
        if let Some(r) = small.as_mut() {
            if (p as u128) * (p as u128) > *r as u128 {
                exhausted = false;
                break;
            }
            while *r % p == 0 {
                *r /= p;
                found.push(p.into());
            }
        } else {
            if BigUint::from(p) * p > rest {
                exhausted = false;
                break;
            }
            loop {
                let (q, rem) = rest.div_rem(&BigUint::from(p));
                if !rem.is_zero() {
                    break;
                }
                rest = q;
                found.push(p.into());
            }
            small = rest.to_u64();
        }
    }
    if let Some(r) = small {
        rest = r.into();
    }

    if !rest.is_one() {
        let below_square = primes
            .last()
            .is_some_and(|&p| BigUint::from(p) * p > rest);
        if !exhausted || below_square {
            found.push(rest);
        } else {
            let mut budget = Budget {
                spent: 0,
                limit: config.rho_budget,
            };
            split_cofactor(rest, config, &mut budget, &mut found)
                .map_err(|spent| Error::FactorBudgetExceeded {
                    n: n.clone(),
                    iterations: spent,
                })?;
        }
    }

    found.sort();
    let mut factors: Vec<PrimePower> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some(last) if last.prime == p => last.exponent += 1,
            _ => factors.push(PrimePower {
                prime: p,
                exponent: 1,
            }),
        }
    }
    Ok(Factorization {
        n: n.clone(),
        factors,
    })
}

struct Budget {
    spent: u64,
    limit: u64,
}

impl Budget {
    fn charge(&mut self, iterations: u64) -> std::result::Result<(), u64> {
        self.spent += iterations;
        if self.spent > self.limit {
            Err(self.spent)
        } else {
            Ok(())
        }
    }
}

fn split_cofactor(
    m: BigUint,
    config: &FactorConfig,
    budget: &mut Budget,
    out: &mut Vec<BigUint>,
) -> std::result::Result<(), u64> {
    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let prime = match m.to_u64() {
            Some(small) => is_prime_u64(small),
            None => !is_prime_with(&m, &config.primality).is_composite(),
        };
        if prime {
            out.push(m);
            continue;
        }
        let d = match m.to_u64() {
            Some(small) => BigUint::from(rho_u64(small, config.seed, budget)?),
            None => rho_big(&m, config.seed, budget)?,
        };
        let other = &m / &d;
        stack.push(d);
        stack.push(other);
    }
    Ok(())
}

const BATCH: u64 = 128;

fn rho_constant(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_mul(0x2545_f491_4f6c_dd1d).wrapping_add(attempt) % 1_000_003 + 1
}

/// A nontrivial factor of the composite `n`.
fn rho_u64(n: u64, seed: u64, budget: &mut Budget) -> std::result::Result<u64, u64> {
    if n.is_multiple_of(2) {
        return Ok(2);
    }
    for attempt in 0.. {
        let c = rho_constant(seed, attempt) % n;
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let mut q = 1u64;
        let mut g = 1u64;
        let mut r = 1u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                budget.charge(steps)?;
                g = q.gcd(&n);
                k += steps;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = x.abs_diff(ys).gcd(&n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Ok(g);
        }
    }
    unreachable!()
}

fn rho_big(n: &BigUint, seed: u64, budget: &mut Budget) -> std::result::Result<BigUint, u64> {
    if n.is_even() {
        return Ok(2u32.into());
    }
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    for attempt in 0.. {
        let c = BigUint::from(rho_constant(seed, attempt));
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = x.clone();
        let mut ys = x.clone();
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut r = 1u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(&y);
                    q = q * abs_diff(&x, &y) % n;
                }
                budget.charge(steps)?;
                g = q.gcd(n);
                k += steps;
            }
            r *= 2;
        }
        if g == *n {
            loop {
                ys = f(&ys);
                g = abs_diff(&x, &ys).gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g != *n {
            return Ok(g);
        }
    }
    unreachable!()
}
