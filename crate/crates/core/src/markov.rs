//! Solutions of `1 + x^2 + y^2 = k x y`.
//!
//! For `k = 3` the solutions with `x < y` are exactly the odd-indexed Fibonacci
//! neighbours `(F(2j-1), F(2j+1))`, all reachable from the root `(1, 1)` by Vieta
//! jumps `(x, y) -> (y, k y - x)`. For every other `k` there are none; the
//! emptiness is certified by an inequality (`k <= 2`), a residue check mod 4
//! (even `k`) or the even period of `sqrt(k^2 - 4)` (odd `k >= 5`).

use num_bigint::BigUint;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, exact_sqrt_u128, fib};
use crate::contfrac::{k2_minus_4_pattern_holds, period_length};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarkovPair {
    k: u64,
    #[serde(with = "crate::serde_dec")]
    x: BigUint,
    #[serde(with = "crate::serde_dec")]
    y: BigUint,
}

impl MarkovPair {
    /// Fails unless `1 <= x <= y` and `1 + x^2 + y^2 = k x y`.
    pub fn new(k: u64, x: BigUint, y: BigUint) -> Result<Self> {
        if x < BigUint::one() || x > y {
            return Err(Error::domain(format!("need 1 <= x <= y, got ({x}, {y})")));
        }
        if BigUint::one() + &x * &x + &y * &y != &x * &y * k {
            return Err(Error::domain(format!(
                "1 + {x}^2 + {y}^2 != {k}*{x}*{y}"
            )));
        }
        Ok(MarkovPair { k, x, y })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }
}

/// The first `count` pairs `(F(2j-1), F(2j+1))`, `j = 1..=count`.
pub fn k3_pairs(count: usize) -> Vec<MarkovPair> {
    (1..=count as u64)
        .map(|j| {
            MarkovPair::new(3, fib(2 * j - 1), fib(2 * j + 1))
                .expect("odd-indexed Fibonacci neighbours solve the k = 3 equation")
        })
        .collect()
}

/// The Vieta jump `(x, y) -> (y, k y - x)`.
pub fn vieta_next(p: &MarkovPair) -> Result<MarkovPair> {
    let p = MarkovPair::new(p.k, p.x.clone(), p.y.clone())?;
    let ky = &p.y * p.k;
    if ky < p.x {
        return Err(Error::domain("Vieta jump leaves the positive integers"));
    }
    MarkovPair::new(p.k, p.y.clone(), ky - &p.x)
}

/// Every `y` with `x <= y <= bound` solving the equation for this `x`:
/// the roots `(k x +- s) / 2` where `s^2 = (k x)^2 - 4 (1 + x^2)`.
fn roots_for_x(k: u64, x: u64, bound: u64) -> Vec<u64> {
    let kx = k as u128 * x as u128;
    let narrow = (x as u128 * x as u128)
        .checked_add(1)
        .and_then(|v| v.checked_mul(4))
        .zip(kx.checked_mul(kx));
    let (kx, s): (BigUint, BigUint) = match narrow {
        Some((four, kx2)) => match kx2.checked_sub(four).and_then(exact_sqrt_u128) {
            Some(s) => (kx.into(), s.into()),
            None => return Vec::new(),
        },
        None => {
            let kx = BigUint::from(kx);
            let xb = BigUint::from(x);
            let four = (&xb * &xb + 1u32) * 4u32;
            let kx2 = &kx * &kx;
            if kx2 < four {
                return Vec::new();
            }
            match exact_sqrt(&(kx2 - four)) {
                Some(s) => (kx, s),
                None => return Vec::new(),
            }
        }
    };
    let mut out: Vec<u64> = [&kx - &s, &kx + &s]
        .into_iter()
        .filter(|num| !num.bit(0))
        .filter_map(|num| u64::try_from(num >> 1u8).ok())
        .filter(|&y| y >= x && y <= bound)
        .collect();
    out.dedup();
    out
}

/// All `1 <= x <= y <= bound` solving the equation, sorted by `(x, y)`.
pub fn brute_solutions(k: u64, bound: u64) -> Vec<MarkovPair> {
    (1..=bound)
        .into_par_iter()
        .flat_map_iter(|x| {
            roots_for_x(k, x, bound)
                .into_iter()
                .map(move |y| (x, y))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(x, y)| MarkovPair::new(k, x.into(), y.into()).expect("scan emits verified roots"))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EmptinessArgument {
    /// `k <= 2`: `1 + x^2 + y^2 > 2xy >= kxy`.
    Inequality,
    /// Even `k`: no residues `x, y mod 4` satisfy the equation mod 4.
    Parity {
        k_mod_4: u8,
        residue_solutions: Vec<(u8, u8)>,
    },
    /// Odd `k >= 5`: the discriminant equation `z^2 - (k^2-4) y^2 = -4` needs an odd
    /// period of `sqrt(k^2 - 4)`.
    Period {
        #[serde(with = "crate::serde_dec")]
        d: BigUint,
        period_length: usize,
        pattern_matches: bool,
    },
}

impl EmptinessArgument {
    pub fn certifies(&self) -> bool {
        match self {
            EmptinessArgument::Inequality => true,
            EmptinessArgument::Parity {
                residue_solutions, ..
            } => residue_solutions.is_empty(),
            EmptinessArgument::Period { period_length, .. } => period_length % 2 == 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptinessStatus {
    CertifiedEmpty,
    EmptyUpToBound,
    SolutionsFound,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmptinessReport {
    pub k: u64,
    #[serde(with = "crate::serde_dec::word")]
    pub bound: u64,
    pub brute_force_solutions: Vec<MarkovPair>,
    pub argument: EmptinessArgument,
    pub status: EmptinessStatus,
}

fn parity_argument(k: u64) -> EmptinessArgument {
    let km = (k % 4) as u32;
    let residue_solutions = (0u8..4)
        .flat_map(|x| (0u8..4).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            let (x, y) = (x as u32, y as u32);
            (1 + x * x + y * y) % 4 == (km * x * y) % 4
        })
        .collect();
    EmptinessArgument::Parity {
        k_mod_4: km as u8,
        residue_solutions,
    }
}

/// Scans to `bound` and attaches the argument that settles `k` for all sizes.
pub fn verify_no_solutions(k: u64, bound: u64) -> Result<EmptinessReport> {
    if k == 3 {
        return Err(Error::domain("k = 3 has infinitely many solutions"));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let argument = if k <= 2 {
        EmptinessArgument::Inequality
    } else if k.is_multiple_of(2) {
        parity_argument(k)
    } else {
        let kb = BigUint::from(k);
        let d = &kb * &kb - 4u32;
        EmptinessArgument::Period {
            period_length: period_length(&d)?,
            pattern_matches: k2_minus_4_pattern_holds(k)?,
            d,
        }
    };
    let brute_force_solutions = brute_solutions(k, bound);
    let status = if !brute_force_solutions.is_empty() {
        EmptinessStatus::SolutionsFound
    } else if argument.certifies() {
        EmptinessStatus::CertifiedEmpty
    } else {
        EmptinessStatus::EmptyUpToBound
    };
    Ok(EmptinessReport {
        k,
        bound,
        brute_force_solutions,
        argument,
        status,
    })
}
