//! Divisibility `n | sigma_3(n)` for two-prime shapes, and its link to even
//! perfect numbers.
//!
//! For `n = p q` (`p < q`) only `n = 6` divides `sigma_3(n)`; for
//! `n = 2^alpha p` exactly the even perfect numbers other than 28 do. The scans
//! here check both statements over ranges, and test the open converse over all
//! `n` with two prime factors. Three auxiliary Diophantine uniqueness claims
//! used by the classification are checked by brute force.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime, is_prime_u64, sigma_from_factorization, sigma_mod};
use crate::sieve::{primes_up_to, scan_factored};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    /// `p q` with odd primes `p < q`.
    SemiprimeDistinct,
    /// `2^alpha p`, `alpha >= 1`, `p` an odd prime (this includes `2p`).
    TwoPowerTimesPrime,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    EvenPerfect,
    /// 28 is even perfect but does not divide `sigma_3(28)`.
    #[serde(rename = "the-exception-28")]
    TheException28,
    NonDividing,
    /// Divides `sigma_3(n)` without being an even perfect number.
    OtherDividing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sigma3Verdict {
    #[serde(with = "crate::serde_dec")]
    pub n: BigUint,
    pub divisible: bool,
    pub shape: Shape,
    pub classification: Classification,
}

fn shape_of(factors: &[(BigUint, u32)]) -> Shape {
    let two = BigUint::from(2u32);
    match factors {
        [(p, _), (_, 1)] if *p == two => Shape::TwoPowerTimesPrime,
        [(_, 1), (_, 1)] => Shape::SemiprimeDistinct,
        _ => Shape::Other,
    }
}

/// `n = 2^(p-1) (2^p - 1)` with `2^p - 1` prime.
fn is_even_perfect(factors: &[(BigUint, u32)]) -> bool {
    match factors {
        [(two, e), (m, 1)] if *two == BigUint::from(2u32) => {
            let mersenne = (BigUint::from(1u32) << (*e + 1)) - 1u32;
            *m == mersenne && is_prime_u64(*e as u64 + 1)
        }
        _ => false,
    }
}

fn classify(n: BigUint, factors: &[(BigUint, u32)], divisible: bool) -> Sigma3Verdict {
    let classification = if n == BigUint::from(28u32) {
        Classification::TheException28
    } else if is_even_perfect(factors) {
        Classification::EvenPerfect
    } else if divisible {
        Classification::OtherDividing
    } else {
        Classification::NonDividing
    };
    Sigma3Verdict {
        shape: shape_of(factors),
        n,
        divisible,
        classification,
    }
}

pub fn classify_sigma3(n: &BigUint) -> Result<Sigma3Verdict> {
    if *n < BigUint::from(2u32) {
        return Err(Error::domain(format!("classification needs n >= 2, got {n}")));
    }
    let f = factorize(n)?;
    let divisible = (sigma_from_factorization(3, &f) % n).is_zero();
    let pairs: Vec<(BigUint, u32)> = f
        .factors()
        .iter()
        .map(|pp| (pp.prime.clone(), pp.exponent))
        .collect();
    Ok(classify(n.clone(), &pairs, divisible))
}

fn small_verdict(n: u64, factors: &[(u64, u32)], divisible: bool) -> Sigma3Verdict {
    let pairs: Vec<(BigUint, u32)> = factors.iter().map(|&(p, e)| (p.into(), e)).collect();
    classify(n.into(), &pairs, divisible)
}

/// Every `n = p q <= limit` with primes `p < q` and `n | sigma_3(n)`.
pub fn scan_semiprimes(limit: u64) -> Vec<u64> {
    let primes = primes_up_to(limit / 2);
    let mut hits: Vec<u64> = primes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p)| {
            primes[i + 1..]
                .iter()
                .take_while(move |&&q| p.saturating_mul(q) <= limit)
                .filter(move |&&q| sigma_mod(3, &[(p, 1), (q, 1)], p * q) == 0)
                .map(move |&q| p * q)
        })
        .collect();
    hits.sort_unstable();
    hits
}

/// Every `n = 2^alpha p <= limit` (`alpha >= 1`, `p` odd prime) with `n | sigma_3(n)`, ascending.
pub fn scan_two_power_times_prime(limit: u64) -> Vec<Sigma3Verdict> {
    let primes = primes_up_to(limit / 2);
    let mut hits: Vec<(u64, u32, u64)> = (1..64u32)
        .take_while(|&alpha| (3u64 << alpha) <= limit && (3u128 << alpha) <= limit as u128)
        .flat_map(|alpha| {
            let pow = 1u64 << alpha;
            primes[1..]
                .par_iter()
                .take_any_while(move |&&p| p.saturating_mul(pow) <= limit)
                .filter(move |&&p| sigma_mod(3, &[(2, alpha), (p, 1)], pow * p) == 0)
                .map(move |&p| (pow * p, alpha, p))
                .collect::<Vec<_>>()
        })
        .collect();
    hits.sort_unstable();
    hits.into_iter()
        .map(|(n, alpha, p)| small_verdict(n, &[(2, alpha), (p, 1)], true))
        .collect()
}

/// Which prime count the conjecture's omega refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OmegaMode {
    /// Number of distinct primes.
    Distinct,
    /// Number of primes with multiplicity.
    Total,
}

impl OmegaMode {
    fn count(self, factors: &[(u64, u32)]) -> u32 {
        match self {
            OmegaMode::Distinct => factors.len() as u32,
            OmegaMode::Total => factors.iter().map(|f| f.1).sum(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CounterexampleKind {
    /// omega(n) = 2 and `n | sigma_3(n)`, yet `n` is not an even perfect number.
    DividesButNotEvenPerfect,
    /// An even perfect number other than 28 with omega(n) != 2.
    EvenPerfectWrongOmega,
    /// An even perfect number other than 28 not dividing `sigma_3(n)`.
    EvenPerfectNotDividing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(with = "crate::serde_dec::word")]
    pub n: u64,
    pub kind: CounterexampleKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvenPerfectAudit {
    #[serde(with = "crate::serde_dec::word")]
    pub n: u64,
    pub mersenne_exponent: u32,
    pub omega: u32,
    pub divisible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureReport {
    #[serde(with = "crate::serde_dec::word")]
    pub limit: u64,
    pub omega: OmegaMode,
    /// Every `n <= limit` with omega(n) = 2 and `n | sigma_3(n)`.
    #[serde(with = "crate::serde_dec::word_vec")]
    pub dividing: Vec<u64>,
    pub even_perfect_audit: Vec<EvenPerfectAudit>,
    pub counterexamples: Vec<Counterexample>,
}

/// `(p, 2^(p-1) (2^p - 1))` for every even perfect number `<= limit`.
pub fn even_perfect_numbers(limit: u64) -> Vec<(u32, u64)> {
    (2u32..64)
        .filter(|&p| is_prime_u64(p as u64))
        .map(|p| (p, (1u128 << (p - 1)) * ((1u128 << p) - 1)))
        .take_while(|&(_, n)| n <= limit as u128)
        .filter(|&(p, _)| !is_prime(&((BigUint::from(1u32) << p) - 1u32)).is_composite())
        .map(|(p, n)| (p, n as u64))
        .collect()
}

/// Tests "omega(n) = 2 and n | sigma_3(n) iff n is an even perfect number other than 28"
/// for `n <= limit`, reporting violations as data.
pub fn conjecture_scan(limit: u64, omega: OmegaMode) -> ConjectureReport {
    let dividing = scan_factored(2, limit, |n, f| {
        (omega.count(f) == 2 && sigma_mod(3, f, n) == 0).then_some(n)
    });
    let perfect = even_perfect_numbers(limit);
    let even_perfect_audit: Vec<EvenPerfectAudit> = perfect
        .iter()
        .map(|&(p, n)| {
            let f = [(2u64, p - 1), ((1u64 << p) - 1, 1)];
            EvenPerfectAudit {
                n,
                mersenne_exponent: p,
                omega: omega.count(&f),
                divisible: sigma_mod(3, &f, n) == 0,
            }
        })
        .collect();

    let mut counterexamples: Vec<Counterexample> = dividing
        .iter()
        .filter(|n| !perfect.iter().any(|&(_, m)| m == **n) || **n == 28)
        .map(|&n| Counterexample {
            n,
            kind: CounterexampleKind::DividesButNotEvenPerfect,
        })
        .collect();
    for a in even_perfect_audit.iter().filter(|a| a.n != 28) {
        if a.omega != 2 {
            counterexamples.push(Counterexample {
                n: a.n,
                kind: CounterexampleKind::EvenPerfectWrongOmega,
            });
        } else if !a.divisible {
            counterexamples.push(Counterexample {
                n: a.n,
                kind: CounterexampleKind::EvenPerfectNotDividing,
            });
        }
    }
    counterexamples.sort_by_key(|c| c.n);
    ConjectureReport {
        limit,
        omega,
        dividing,
        even_perfect_audit,
        counterexamples,
    }
}

/// Prime pairs `p < q <= limit` with `p | q + 1` and `q | p + 1`.
pub fn successor_dividing_prime_pairs(limit: u64) -> Vec<(u64, u64)> {
    let primes = primes_up_to(limit);
    primes
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &p)| {
            primes[i + 1..]
                .iter()
                .filter(move |&&q| (q + 1) % p == 0 && (p + 1) % q == 0)
                .map(move |&q| (p, q))
        })
        .collect()
}

/// `(x, y, (x^2 - x + 1) / (xy - 1))` for every `1 <= x <= x_limit`, `2 <= y <= y_limit`
/// where the division is exact.
pub fn quadratic_quotients(x_limit: u64, y_limit: u64) -> Vec<(u64, u64, u64)> {
    (1..=x_limit)
        .into_par_iter()
        .flat_map_iter(|x| {
            let num = x * x - x + 1;
            (2..=y_limit).filter_map(move |y| {
                let den = x * y - 1;
                num.is_multiple_of(den).then_some((x, y, num / den))
            })
        })
        .collect()
}

/// Pairs `1 <= y <= x <= limit` with `x | y^2 - y + 1` and `y | x^2 - x + 1`.
pub fn mutual_quadratic_divisors(limit: u64) -> Vec<(u64, u64)> {
    (1..=limit)
        .into_par_iter()
        .flat_map_iter(|x| {
            let fx = x * x - x + 1;
            (1..=x).filter_map(move |y| {
                let fy = y * y - y + 1;
                (fy % x == 0 && fx % y == 0).then_some((x, y))
            })
        })
        .collect()
}

/// Divisibility of `sigma_3(n)` by `n` for a machine-word `n`.
pub fn divides_sigma3(n: u64) -> Result<bool> {
    if n < 2 {
        return Err(Error::domain("n must be at least 2"));
    }
    let v = classify_sigma3(&n.into())?;
    debug_assert_eq!(v.n.to_u64(), Some(n));
    Ok(v.divisible)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(n: u64) -> Sigma3Verdict {
        classify_sigma3(&n.into()).unwrap()
    }

    #[test]
    fn classification_examples() {
        let v = verdict(6);
        assert!(v.divisible);
        assert_eq!(v.classification, Classification::EvenPerfect);
        let v = verdict(28);
        assert!(!v.divisible);
        assert_eq!(v.classification, Classification::TheException28);
        let v = verdict(496);
        assert!(v.divisible);
        assert_eq!(v.classification, Classification::EvenPerfect);
        assert_eq!(v.shape, Shape::TwoPowerTimesPrime);
        assert_eq!(verdict(15).shape, Shape::SemiprimeDistinct);
        assert_eq!(verdict(15).classification, Classification::NonDividing);
        assert_eq!(verdict(12).shape, Shape::TwoPowerTimesPrime);
        assert_eq!(verdict(60).shape, Shape::Other);
        assert!(classify_sigma3(&1u32.into()).is_err());
    }

    #[test]
    fn excluded_cases_do_not_divide() {
        for n in [28, 56, 14] {
            assert!(!divides_sigma3(n).unwrap(), "{n}");
        }
    }

    #[test]
    fn semiprime_scan() {
        assert_eq!(scan_semiprimes(1_000_000), vec![6]);
        assert!(scan_semiprimes(5).is_empty());
        assert_eq!(scan_semiprimes(6), vec![6]);
    }

    #[test]
    fn two_power_scan() {
        let ns = |v: Vec<Sigma3Verdict>| -> Vec<u64> {
            v.iter().map(|x| x.n.to_u64().unwrap()).collect()
        };
        let v = scan_two_power_times_prime(10_000);
        assert!(v.iter().all(|x| x.classification == Classification::EvenPerfect));
        assert_eq!(ns(v), vec![6, 496, 8128]);
        assert_eq!(ns(scan_two_power_times_prime(100)), vec![6]);
        assert!(scan_two_power_times_prime(5).is_empty());
    }

    #[test]
    fn conjecture_small() {
        let r = conjecture_scan(30, OmegaMode::Distinct);
        assert!(r.counterexamples.is_empty());
        assert_eq!(r.dividing, vec![6]);
        assert_eq!(r.even_perfect_audit.len(), 2);
        assert!(r.even_perfect_audit[0].divisible);
        assert!(!r.even_perfect_audit[1].divisible);
        assert!(conjecture_scan(5, OmegaMode::Distinct).counterexamples.is_empty());
        let r = conjecture_scan(1000, OmegaMode::Total);
        assert_eq!(r.dividing, vec![6]);
        assert_eq!(
            r.counterexamples,
            vec![Counterexample { n: 496, kind: CounterexampleKind::EvenPerfectWrongOmega }]
        );
    }

    #[test]
    fn even_perfects() {
        let got: Vec<u64> = even_perfect_numbers(100_000_000).iter().map(|p| p.1).collect();
        assert_eq!(got, vec![6, 28, 496, 8128, 33_550_336]);
    }

    #[test]
    fn auxiliary_uniqueness() {
        assert_eq!(successor_dividing_prime_pairs(10_000), vec![(2, 3)]);
        assert!(successor_dividing_prime_pairs(2).is_empty());
        assert_eq!(successor_dividing_prime_pairs(3), vec![(2, 3)]);

        let q = quadratic_quotients(1000, 1000);
        assert!(q.iter().all(|&(_, _, k)| k == 1));
        assert!(q.contains(&(1, 2, 1)));
        assert_eq!(quadratic_quotients(1, 2), vec![(1, 2, 1)]);
        assert!(quadratic_quotients(0, 10).is_empty());

        assert_eq!(mutual_quadratic_divisors(2000), vec![(1, 1)]);
        assert_eq!(mutual_quadratic_divisors(1), vec![(1, 1)]);
        assert!(mutual_quadratic_divisors(0).is_empty());
    }
}
