//! Continued fractions of quadratic surds `sqrt(N)` and the negative Pell
//! equations `x^2 - N y^2 = -1` and `x^2 - d y^2 = -4`.
//!
//! The expansion runs the exact integer recurrence on `(P, Q)`:
//! `P' = a Q - P`, `Q' = (N - P'^2) / Q`, `a' = floor((a0 + P') / Q')`,
//! and closes the period when `(P, Q)` returns to its first post-initial value.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{exact_sqrt, isqrt};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SqrtContinuedFraction {
    #[serde(with = "crate::serde_dec")]
    n: BigUint,
    #[serde(with = "crate::serde_dec")]
    a0: BigUint,
    #[serde(with = "crate::serde_dec::vec")]
    period: Vec<BigUint>,
}

impl SqrtContinuedFraction {
    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn a0(&self) -> &BigUint {
        &self.a0
    }

    /// Minimal repeating block `a_1, ..., a_l`.
    pub fn period(&self) -> &[BigUint] {
        &self.period
    }

    pub fn period_length(&self) -> usize {
        self.period.len()
    }

    /// Partial quotients `a_0, a_1, ...`, repeating forever.
    pub fn partial_quotients(&self) -> impl Iterator<Item = &BigUint> + '_ {
        std::iter::once(&self.a0).chain(self.period.iter().cycle())
    }

    /// Convergents `p_i / q_i` for `i = 0, 1, ...`.
    pub fn convergents(&self) -> Convergents<'_> {
        Convergents {
            quotients: Box::new(self.partial_quotients()),
            p: (BigUint::one(), BigUint::zero()),
            q: (BigUint::zero(), BigUint::one()),
        }
    }
}

pub struct Convergents<'a> {
    quotients: Box<dyn Iterator<Item = &'a BigUint> + 'a>,
    // (current, previous)
    p: (BigUint, BigUint),
    q: (BigUint, BigUint),
}

impl Iterator for Convergents<'_> {
    type Item = (BigUint, BigUint);

    fn next(&mut self) -> Option<Self::Item> {
        let a = self.quotients.next()?;
        let p = a * &self.p.0 + &self.p.1;
        let q = a * &self.q.0 + &self.q.1;
        self.p = (p.clone(), std::mem::take(&mut self.p.0));
        self.q = (q.clone(), std::mem::take(&mut self.q.0));
        Some((p, q))
    }
}

fn check_non_square(n: &BigUint) -> Result<()> {
    if *n < BigUint::from(2u32) {
        return Err(Error::domain(format!("sqrt expansion needs N >= 2, got {n}")));
    }
    if exact_sqrt(n).is_some() {
        return Err(Error::domain(format!("{n} is a perfect square")));
    }
    Ok(())
}

pub fn sqrt_cf(n: &BigUint) -> Result<SqrtContinuedFraction> {
    check_non_square(n)?;
    let a0 = isqrt(n);
    let mut p = BigUint::zero();
    let mut q = BigUint::one();
    let mut a = a0.clone();
    let mut first: Option<(BigUint, BigUint)> = None;
    let mut period = Vec::new();
    loop {
        p = &a * &q - &p;
        q = (n - &p * &p) / &q;
        match &first {
            Some((p1, q1)) if *p1 == p && *q1 == q => break,
            Some(_) => {}
            None => first = Some((p.clone(), q.clone())),
        }
        a = (&a0 + &p) / &q;
        period.push(a.clone());
    }
    debug_assert_eq!(period.last(), Some(&(&a0 << 1u8)));
    Ok(SqrtContinuedFraction {
        n: n.clone(),
        a0,
        period,
    })
}

pub fn period_length(n: &BigUint) -> Result<usize> {
    Ok(sqrt_cf(n)?.period_length())
}

/// Whether `x^2 - N y^2 = -1` has a solution: exactly when the period of `sqrt(N)` is odd.
pub fn neg_pell_solvable(n: &BigUint) -> Result<bool> {
    Ok(period_length(n)? % 2 == 1)
}

/// A checked witness to `x^2 - N y^2 = c`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    #[serde(with = "crate::serde_dec")]
    n: BigUint,
    c: i32,
    #[serde(with = "crate::serde_dec")]
    x: BigUint,
    #[serde(with = "crate::serde_dec")]
    y: BigUint,
}

impl PellSolution {
    /// Fails unless `c` is -1 or -4, `y >= 1` and the equation holds exactly.
    pub fn new(n: BigUint, c: i32, x: BigUint, y: BigUint) -> Result<Self> {
        if c != -1 && c != -4 {
            return Err(Error::domain(format!("unsupported right-hand side {c}")));
        }
        if y.is_zero() {
            return Err(Error::domain("Pell witness needs y >= 1"));
        }
        let lhs = BigInt::from(&x * &x) - BigInt::from(&n * &y * &y);
        if lhs != BigInt::from(c) {
            return Err(Error::domain(format!(
                "{x}^2 - {n}*{y}^2 = {lhs}, not {c}"
            )));
        }
        Ok(PellSolution { n, c, x, y })
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn c(&self) -> i32 {
        self.c
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }
}

/// Least solution of `x^2 - N y^2 = -1`, read off the convergent closing the first period.
pub fn neg_pell_fundamental(n: &BigUint) -> Result<PellSolution> {
    let cf = sqrt_cf(n)?;
    let l = cf.period_length();
    if l % 2 == 0 {
        return Err(Error::domain(format!(
            "x^2 - {n} y^2 = -1 has no solution (period {l} is even)"
        )));
    }
    let (x, y) = cf
        .convergents()
        .nth(l - 1)
        .expect("convergents are infinite");
    PellSolution::new(n.clone(), -1, x, y)
}

/// Maps a solution of `x^2 - d y^2 = -4` (d odd) to one of `u^2 - d v^2 = -1` via
/// `u = x(x^2 + 3) / 2`, `v = (x^2 + 1) y / 2`.
pub fn neg4_to_neg1(d: &BigUint, s: &PellSolution) -> Result<PellSolution> {
    if s.c != -4 || s.n != *d {
        return Err(Error::domain(format!(
            "expected a solution of x^2 - {d} y^2 = -4"
        )));
    }
    if d.is_even() {
        return Err(Error::domain(format!("d = {d} must be odd")));
    }
    if s.x.is_even() || s.y.is_even() {
        return Err(Error::domain(format!(
            "x = {} and y = {} must both be odd for odd d",
            s.x, s.y
        )));
    }
    let x2 = &s.x * &s.x;
    let u = (&s.x * (&x2 + 3u32)) >> 1u8;
    let v = ((&x2 + 1u32) * &s.y) >> 1u8;
    PellSolution::new(d.clone(), -1, u, v)
}

/// Whether `x^2 - d y^2 = -4` is solvable for odd non-square `d >= 3`; equivalent to the `-1` equation.
pub fn neg4_solvable(d: &BigUint) -> Result<bool> {
    if d.is_even() || *d < BigUint::from(3u32) {
        return Err(Error::domain(format!("d = {d} must be odd and at least 3")));
    }
    check_non_square(d)?;
    neg_pell_solvable(d)
}

/// Expected expansion `sqrt(k^2 - 4) = [k-1; 1, (k-3)/2, 2, (k-3)/2, 1, 2k-2]` for odd `k >= 5`.
pub fn k2_minus_4_pattern(k: u64) -> Result<(BigUint, Vec<BigUint>)> {
    if k < 5 || k.is_multiple_of(2) {
        return Err(Error::domain(format!("k = {k} must be odd and at least 5")));
    }
    let k = BigUint::from(k);
    let half = (&k - 3u32) >> 1u8;
    let period = vec![
        BigUint::one(),
        half.clone(),
        BigUint::from(2u32),
        half,
        BigUint::one(),
        (&k << 1u8) - 2u32,
    ];
    Ok((&k - 1u32, period))
}

/// Whether the computed expansion of `sqrt(k^2 - 4)` matches [`k2_minus_4_pattern`] exactly.
pub fn k2_minus_4_pattern_holds(k: u64) -> Result<bool> {
    let (a0, period) = k2_minus_4_pattern(k)?;
    let kb = BigUint::from(k);
    let cf = sqrt_cf(&(&kb * &kb - 4u32))?;
    Ok(*cf.a0() == a0 && cf.period() == period.as_slice())
}

/// `p^2 - N q^2` as a signed value.
pub fn pell_norm(n: &BigUint, p: &BigUint, q: &BigUint) -> BigInt {
    BigInt::from(p * p) - BigInt::from(n * q * q)
}
