//! Sieves for the fixed-width range scans.

use rayon::prelude::*;

/// All primes `<= limit`, ascending.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    // index i stands for the odd number 2i+1
    let half = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![false; half];
    composite[0] = true;
    let mut i = 1usize;
    while {
        let p = 2 * i + 1;
        (p as u64) * (p as u64) <= limit
    } {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < half {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_prime_count(limit));
    primes.push(2);
    primes.extend(
        composite
            .iter()
            .enumerate()
            .filter(|(_, &c)| !c)
            .map(|(i, _)| 2 * i as u64 + 1),
    );
    primes
}

fn estimate_prime_count(limit: u64) -> usize {
    let x = limit as f64;
    if x < 17.0 {
        8
    } else {
        (1.26 * x / x.ln()) as usize
    }
}

const MAX_DISTINCT: usize = 15;
const SEGMENT: u64 = 1 << 15;

/// Factorization of a machine-word integer, ascending primes.
#[derive(Debug, Clone, Copy)]
pub struct SmallFactors {
    len: u8,
    items: [(u64, u32); MAX_DISTINCT],
}

impl SmallFactors {
    const EMPTY: SmallFactors = SmallFactors {
        len: 0,
        items: [(0, 0); MAX_DISTINCT],
    };

    fn push(&mut self, p: u64, e: u32) {
        self.items[self.len as usize] = (p, e);
        self.len += 1;
    }
}

impl std::ops::Deref for SmallFactors {
    type Target = [(u64, u32)];

    fn deref(&self) -> &Self::Target {
        &self.items[..self.len as usize]
    }
}

/// Factors every integer in `lo..hi`. `primes` must contain every prime up to `sqrt(hi - 1)`.
pub fn factor_segment(lo: u64, hi: u64, primes: &[u64]) -> Vec<SmallFactors> {
    let len = hi.saturating_sub(lo) as usize;
    let mut rest: Vec<u64> = (lo..hi).collect();
    let mut out = vec![SmallFactors::EMPTY; len];
    for &p in primes {
        if p.saturating_mul(p) >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first;
        while m < hi {
            let i = (m - lo) as usize;
            let mut e = 0;
            while rest[i].is_multiple_of(p) {
                rest[i] /= p;
                e += 1;
            }
            out[i].push(p, e);
            m += p;
        }
    }
    for (f, r) in out.iter_mut().zip(rest) {
        if r > 1 {
            f.push(r, 1);
        }
    }
    out
}

/// Runs `visit(n, factors)` over every `n` in `lo..=hi` (with `lo >= 2`), in parallel
/// segments, and returns the `Some` outputs in ascending `n` order.
pub fn scan_factored<T, F>(lo: u64, hi: u64, visit: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, &[(u64, u32)]) -> Option<T> + Sync,
{
    let lo = lo.max(2);
    if hi < lo {
        return Vec::new();
    }
    let primes = primes_up_to(crate::arith::isqrt_u128(hi as u128) as u64);
    let starts: Vec<u64> = (lo..=hi).step_by(SEGMENT as usize).collect();
    starts
        .into_par_iter()
        .flat_map_iter(|start| {
            let end = start.saturating_add(SEGMENT).min(hi.saturating_add(1));
            factor_segment(start, end, &primes)
                .into_iter()
                .zip(start..end)
                .filter_map(|(f, n)| visit(n, &f))
                .collect::<Vec<_>>()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn primes_match_trial_division() {
        let ps = primes_up_to(10_000);
        let expect: Vec<u64> = (0..=10_000).filter(|&n| trial(n)).collect();
        assert_eq!(ps, expect);
        assert!(primes_up_to(1).is_empty());
        assert_eq!(primes_up_to(2), vec![2]);
        assert_eq!(primes_up_to(9), vec![2, 3, 5, 7]);
    }

    #[test]
    fn segment_factorizations_multiply_back() {
        let primes = primes_up_to(100);
        let fs = factor_segment(2, 9001, &primes);
        for (n, f) in (2..9001u64).zip(&fs) {
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, n);
            assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
            assert!(f.iter().all(|&(p, _)| trial(p)));
        }
        assert_eq!(&*fs[8128 - 2], &[(2, 6), (127, 1)]);
    }

    #[test]
    fn scan_is_ordered_and_complete() {
        let hits = scan_factored(1, 200_000, |n, f| (f.len() == 1 && f[0].1 == 1).then_some(n));
        assert_eq!(hits, primes_up_to(200_000));
        let all = scan_factored(5, 70_000, |n, _| Some(n));
        assert_eq!(all, (5..=70_000).collect::<Vec<_>>());
        assert!(scan_factored(10, 9, |n, _| Some(n)).is_empty());
    }
}
