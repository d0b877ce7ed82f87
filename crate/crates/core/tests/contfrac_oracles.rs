use fperfect_core::contfrac::{
    k2_minus_4_pattern_holds, neg4_solvable, neg4_to_neg1, neg_pell_fundamental,
    neg_pell_solvable, pell_norm, sqrt_cf, PellSolution,
};
use fperfect_core::Natural;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// Textbook `(m, d, a)` recurrence in machine integers; stops at `a = 2 a0`.
fn reference_cf(n: i64) -> (i64, Vec<i64>) {
    let a0 = (n as f64).sqrt() as i64;
    let a0 = (a0 - 1..=a0 + 1).filter(|r| r * r <= n).max().unwrap();
    let (mut m, mut d, mut a) = (0i64, 1i64, a0);
    let mut period = Vec::new();
    while a != 2 * a0 {
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
        period.push(a);
    }
    (a0, period)
}

fn is_square(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64;
    (r.saturating_sub(1)..=r + 1).any(|s| s * s == n)
}

/// Norms of the first `2 * len` convergents, computed from the reference expansion.
fn convergent_norms(n: i64, a0: i64, period: &[i64]) -> Vec<(BigInt, BigInt, BigInt)> {
    let nb = BigInt::from(n);
    let (mut p, mut p_prev) = (BigInt::from(a0), BigInt::one());
    let (mut q, mut q_prev) = (BigInt::one(), BigInt::zero());
    let mut out = vec![(p.clone(), q.clone(), &p * &p - &nb * &q * &q)];
    for &a in period.iter().cycle().take(2 * period.len()) {
        let np = BigInt::from(a) * &p + &p_prev;
        let nq = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, np);
        q_prev = std::mem::replace(&mut q, nq);
        out.push((p.clone(), q.clone(), &p * &p - &nb * &q * &q));
    }
    out
}

#[test]
fn expansion_matches_reference_recurrence() {
    for n in 2u64..=10_000 {
        if is_square(n) {
            continue;
        }
        let (a0, period) = reference_cf(n as i64);
        let cf = sqrt_cf(&n.into()).unwrap();
        assert_eq!(*cf.a0(), BigUint::from(a0 as u64), "N = {n}");
        let got: Vec<BigUint> = period.iter().map(|&a| BigUint::from(a as u64)).collect();
        assert_eq!(cf.period(), got.as_slice(), "N = {n}");
    }
}

#[test]
fn period_parity_matches_convergent_search() {
    let mut disagreements = Vec::new();
    for n in 2u64..=10_000 {
        if is_square(n) {
            continue;
        }
        let (a0, period) = reference_cf(n as i64);
        let norms = convergent_norms(n as i64, a0, &period);
        let first = norms.iter().find(|t| t.2 == BigInt::from(-1));
        let solvable = neg_pell_solvable(&n.into()).unwrap();
        if solvable != first.is_some() {
            disagreements.push(n);
            continue;
        }
        if let Some((p, q, _)) = first {
            let fund = neg_pell_fundamental(&n.into()).unwrap();
            assert_eq!(BigInt::from(fund.x().clone()), *p, "N = {n}");
            assert_eq!(BigInt::from(fund.y().clone()), *q, "N = {n}");
        } else {
            assert!(neg_pell_fundamental(&n.into()).is_err());
        }
    }
    assert!(disagreements.is_empty(), "{disagreements:?}");
}

#[test]
fn convergent_norms_alternate_in_sign() {
    for n in [2u64, 3, 7, 13, 61, 94, 109, 991] {
        let nb = Natural::from(n);
        let cf = sqrt_cf(&nb).unwrap();
        for (i, (p, q)) in cf.convergents().take(40).enumerate() {
            let norm = pell_norm(&nb, &p, &q);
            let expected_negative = i % 2 == 0;
            assert_eq!(norm < BigInt::zero(), expected_negative, "N = {n}, i = {i}");
        }
    }
}

/// `x^2 - d y^2 = -4` by direct search over small `y`.
fn brute_neg4(d: u64) -> Option<(u64, u64)> {
    (1u64..=200).find_map(|y| {
        let t = (d * y * y).checked_sub(4)?;
        is_square(t).then(|| ((t as f64).sqrt().round() as u64, y))
    })
}

#[test]
fn minus_four_solvability_matches_oracle() {
    for d in (3u64..=5000).step_by(2) {
        if is_square(d) {
            continue;
        }
        let oracle = if d <= 16 {
            brute_neg4(d).is_some()
        } else {
            // Any solution has gcd(x, y) in {1, 2}, so x/y or (x/2)/(y/2) is a convergent.
            let (a0, period) = reference_cf(d as i64);
            convergent_norms(d as i64, a0, &period)
                .iter()
                .any(|t| t.2 == BigInt::from(-1) || t.2 == BigInt::from(-4))
        };
        assert_eq!(neg4_solvable(&d.into()).unwrap(), oracle, "d = {d}");
    }
}

#[test]
fn odd_minus_four_solutions_map_to_minus_one() {
    let mut mapped = 0;
    for d in (5u64..=2000).step_by(2) {
        if is_square(d) {
            continue;
        }
        let (a0, period) = reference_cf(d as i64);
        let odd = convergent_norms(d as i64, a0, &period)
            .into_iter()
            .find(|t| t.2 == BigInt::from(-4) && t.0.bit(0) && t.1.bit(0));
        if let Some((x, y, _)) = odd {
            let s = PellSolution::new(
                d.into(),
                -4,
                x.to_biguint().unwrap(),
                y.to_biguint().unwrap(),
            )
            .unwrap();
            let t = neg4_to_neg1(&d.into(), &s).unwrap();
            assert_eq!(pell_norm(&d.into(), t.x(), t.y()), BigInt::from(-1));
            mapped += 1;
        }
    }
    assert!(mapped > 10, "only {mapped} odd solutions found");
}

#[test]
fn k_squared_minus_four_has_period_six() {
    for k in (5u64..=499).step_by(2) {
        assert!(k2_minus_4_pattern_holds(k).unwrap(), "k = {k}");
        let (_, period) = reference_cf((k * k - 4) as i64);
        assert_eq!(period.len(), 6, "k = {k}");
    }
}
