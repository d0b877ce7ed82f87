//! Primality testing.
//!
//! Inputs below 2^64 get a deterministic answer: trial division by the primes
//! below 1000 followed by a strong-pseudoprime test to the first twelve prime
//! bases, which has no false positives in that range. Larger inputs get
//! `rounds` strong-pseudoprime tests to random bases plus a strong Lucas test
//! with Selfridge parameters, and are reported as probable primes.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::isqrt::exact_sqrt;
use crate::sieve::primes_up_to;

const DETERMINISTIC_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const SMALL_PRIME_BOUND: u64 = 1000;
const DEFAULT_SEED: u64 = 0x9e37_79b9_7f4a_7c15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Composite,
    ProvablePrime,
    ProbablePrime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimalityResult {
    pub verdict: Verdict,
    /// Random-base strong-pseudoprime rounds performed; zero on the deterministic path.
    pub witness_rounds: u32,
}

impl PrimalityResult {
    fn deterministic(prime: bool) -> Self {
        PrimalityResult {
            verdict: if prime {
                Verdict::ProvablePrime
            } else {
                Verdict::Composite
            },
            witness_rounds: 0,
        }
    }

    pub fn is_composite(&self) -> bool {
        self.verdict == Verdict::Composite
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimalityConfig {
    /// Random-base rounds for inputs above 2^64. Must be at least 1.
    pub rounds: u32,
    /// Base seed; 0 selects a fixed built-in seed.
    pub seed: u64,
}

impl Default for PrimalityConfig {
    fn default() -> Self {
        PrimalityConfig { rounds: 40, seed: 0 }
    }
}

pub(crate) fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SMALL_PRIME_BOUND))
}

pub fn is_prime(n: &BigUint) -> PrimalityResult {
    is_prime_with(n, &PrimalityConfig::default())
}

pub fn is_prime_with(n: &BigUint, config: &PrimalityConfig) -> PrimalityResult {
    if let Some(small) = n.to_u64() {
        return PrimalityResult::deterministic(is_prime_u64(small));
    }
    for &p in small_primes() {
        if (n % p).is_zero() {
            return PrimalityResult::deterministic(false);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(task_seed(config.seed, n));
    let rounds = config.rounds.max(1);
    for round in 1..=rounds {
        let base = random_base(n, &mut rng);
        if !strong_probable_prime(n, &base) {
            return PrimalityResult {
                verdict: Verdict::Composite,
                witness_rounds: round,
            };
        }
    }
    let verdict = if strong_lucas_probable_prime(n) {
        Verdict::ProbablePrime
    } else {
        Verdict::Composite
    };
    PrimalityResult {
        verdict,
        witness_rounds: rounds,
    }
}

/// Deterministic primality for machine-word inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in small_primes() {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < SMALL_PRIME_BOUND * SMALL_PRIME_BOUND {
        return true;
    }
    let (d, s) = split_even(n - 1);
    DETERMINISTIC_BASES
        .iter()
        .all(|&a| strong_probable_prime_u64(n, a, d, s))
}

fn split_even(m: u64) -> (u64, u32) {
    let s = m.trailing_zeros();
    (m >> s, s)
}

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn strong_probable_prime_u64(n: u64, a: u64, d: u64, s: u32) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime(n: &BigUint, base: &BigUint) -> bool {
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    let mut x = base.modpow(&d, n);
    if x.is_one() || x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == n_minus_1 {
            return true;
        }
    }
    false
}

fn task_seed(seed: u64, n: &BigUint) -> u64 {
    let mut h = if seed == 0 { DEFAULT_SEED } else { seed };
    for digit in n.iter_u64_digits() {
        h = splitmix64(h ^ digit);
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform-ish base in `[2, n-2]`.
fn random_base(n: &BigUint, rng: &mut ChaCha8Rng) -> BigUint {
    let words = n.bits().div_ceil(32) as usize + 1;
    let digits: Vec<u32> = (0..words).map(|_| rng.next_u32()).collect();
    BigUint::new(digits) % (n - 3u32) + 2u32
}

/// Jacobi symbol `(a / n)` for odd `n`.
fn jacobi(a: i64, n: &BigUint) -> i32 {
    let mut a = if a >= 0 {
        BigUint::from(a as u64) % n
    } else {
        let r = BigUint::from(a.unsigned_abs()) % n;
        if r.is_zero() {
            r
        } else {
            n - r
        }
    };
    let mut n = n.clone();
    let mut result = 1;
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n_mod_8 = (&n % 8u32).to_u32().unwrap_or(0);
        if tz % 2 == 1 && (n_mod_8 == 3 || n_mod_8 == 5) {
            result = -result;
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32) == BigUint::from(3u32) && (&n % 4u32) == BigUint::from(3u32) {
            result = -result;
        }
        a %= &n;
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

fn half_mod(x: BigUint, n: &BigUint) -> BigUint {
    let x = x % n;
    if x.is_odd() {
        (x + n) >> 1u8
    } else {
        x >> 1u8
    }
}

fn signed_mod(v: i64, n: &BigUint) -> BigUint {
    if v >= 0 {
        BigUint::from(v as u64) % n
    } else {
        let r = BigUint::from(v.unsigned_abs()) % n;
        if r.is_zero() {
            r
        } else {
            n - r
        }
    }
}

/// Strong Lucas probable-prime test with Selfridge's parameter choice
/// (`P = 1`, `Q = (1 - D) / 4`, first `D` in 5, -7, 9, -11, ... with `(D/n) = -1`).
pub(crate) fn strong_lucas_probable_prime(n: &BigUint) -> bool {
    if n.is_even() {
        return *n == BigUint::from(2u32);
    }
    if exact_sqrt(n).is_some() {
        return false;
    }
    let mut d: i64 = 5;
    loop {
        match jacobi(d, n) {
            -1 => break,
            0 if BigUint::from(d.unsigned_abs()) != *n => return false,
            _ => {}
        }
        d = if d > 0 { -(d + 2) } else { -d + 2 };
    }
    let q = (1 - d) / 4;
    let d_mod = signed_mod(d, n);
    let q_mod = signed_mod(q, n);

    let n_plus_1 = n + 1u32;
    let s = n_plus_1.trailing_zeros().unwrap_or(0);
    let k = &n_plus_1 >> s;

    // left-to-right ladder over the bits of k, P = 1
    let mut u = BigUint::one();
    let mut v = BigUint::one();
    let mut qk = q_mod.clone();
    for i in (0..k.bits() - 1).rev() {
        u = &u * &v % n;
        v = (&v * &v + n + n - (&qk << 1u8) % n) % n;
        qk = &qk * &qk % n;
        if k.bit(i) {
            let u_next = half_mod(&u + &v, n);
            let v_next = half_mod(&d_mod * &u + &v, n);
            u = u_next;
            v = v_next;
            qk = &qk * &q_mod % n;
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v + n + n - (&qk << 1u8) % n) % n;
        if v.is_zero() {
            return true;
        }
        qk = &qk * &qk % n;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn reference_values() {
        assert_eq!(is_prime(&2u32.into()).verdict, Verdict::ProvablePrime);
        assert_eq!(is_prime(&233u32.into()).verdict, Verdict::ProvablePrime);
        assert_eq!(is_prime(&20737u32.into()).verdict, Verdict::Composite);
        assert_eq!(is_prime(&0u32.into()).verdict, Verdict::Composite);
        assert_eq!(is_prime(&1u32.into()).verdict, Verdict::Composite);
    }

    #[test]
    fn agrees_with_trial_division_to_a_million() {
        for n in 0..=1_000_000u64 {
            assert_eq!(is_prime_u64(n), trial(n), "n={n}");
        }
    }

    #[test]
    fn base_two_strong_pseudoprimes_are_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        assert!(is_prime_u64(18_446_744_073_709_551_557));
        assert!(!is_prime_u64(u64::MAX));
    }

    #[test]
    fn lucas_test_alone() {
        for p in [3u64, 5, 7, 11, 13, 101, 1009, 7919, 104_729] {
            assert!(strong_lucas_probable_prime(&p.into()), "{p}");
        }
        for c in [9u64, 15, 21, 25, 91, 2047, 3_215_031_751] {
            assert!(!strong_lucas_probable_prime(&c.into()), "{c}");
        }
        // the first strong Lucas pseudoprimes pass on purpose
        for c in [5459u64, 5777, 10877] {
            assert!(strong_lucas_probable_prime(&c.into()), "{c}");
        }
    }

    #[test]
    fn jacobi_matches_euler_criterion() {
        for p in [7u64, 11, 13, 101, 7919] {
            let pb = BigUint::from(p);
            for a in -30i64..30 {
                let r = a.rem_euclid(p as i64) as u64;
                let expect = if r == 0 {
                    0
                } else if pow_mod(r, (p - 1) / 2, p) == 1 {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi(a, &pb), expect, "a={a} p={p}");
            }
        }
    }

    #[test]
    fn large_inputs() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        let r = is_prime(&m127);
        assert_eq!(r.verdict, Verdict::ProbablePrime);
        assert_eq!(r.witness_rounds, 40);
        let m67 = (BigUint::one() << 67u32) - 1u32;
        assert!(is_prime(&m67).is_composite());
        let square = &m127 * &m127;
        assert!(is_prime(&square).is_composite());
        let cfg = PrimalityConfig { rounds: 3, seed: 7 };
        assert_eq!(is_prime_with(&m127, &cfg).witness_rounds, 3);
    }
}
