//! Fibonacci and Lucas numbers, `F(0) = 0, F(1) = F(2) = 1`, `L(0) = 2, L(1) = 1`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::isqrt::exact_sqrt;

/// `(F(i), F(i+1))` by fast doubling.
pub fn fib_pair(i: u64) -> (BigUint, BigUint) {
    let mut a = BigUint::zero();
    let mut b = BigUint::one();
    for bit in (0..u64::BITS - i.leading_zeros()).rev() {
        // F(2k) = F(k) (2F(k+1) - F(k)), F(2k+1) = F(k)^2 + F(k+1)^2
        let c = &a * ((&b << 1u8) - &a);
        let d = &a * &a + &b * &b;
        if (i >> bit) & 1 == 1 {
            b = &c + &d;
            a = d;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

pub fn fib(i: u64) -> BigUint {
    fib_pair(i).0
}

pub fn lucas(i: u64) -> BigUint {
    let (f, f1) = fib_pair(i);
    // L(i) = 2F(i+1) - F(i)
    (f1 << 1u8) - f
}

/// Smallest index `i` with `F(i) = x`, if `x` is a Fibonacci number.
///
/// Membership is decided by `5x^2 + 4` or `5x^2 - 4` being a perfect square.
pub fn is_fibonacci(x: &BigUint) -> Option<u64> {
    if x.is_zero() {
        return Some(0);
    }
    let five_sq = x * x * 5u32;
    let member = exact_sqrt(&(&five_sq + 4u32)).is_some() || exact_sqrt(&(&five_sq - 4u32)).is_some();
    if !member {
        return None;
    }
    let mut a = BigUint::one();
    let mut b = BigUint::one();
    let mut index = 1;
    while a < *x {
        let next = &a + &b;
        a = std::mem::replace(&mut b, next);
        index += 1;
    }
    debug_assert_eq!(a, *x);
    Some(index)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(fib(11), 89u32.into());
        assert_eq!(fib(13), 233u32.into());
        assert_eq!(fib(0), 0u32.into());
        assert_eq!(fib(1), 1u32.into());
        assert_eq!(lucas(0), 2u32.into());
        assert_eq!(lucas(1), 1u32.into());
        assert_eq!(lucas(4), 7u32.into());
        assert_eq!(is_fibonacci(&89u32.into()), Some(11));
        assert_eq!(is_fibonacci(&4u32.into()), None);
        assert_eq!(is_fibonacci(&1u32.into()), Some(1));
        assert_eq!(is_fibonacci(&2u32.into()), Some(3));
    }

    #[test]
    fn fast_doubling_matches_recurrence() {
        let (mut a, mut b) = (BigUint::zero(), BigUint::one());
        let (mut l0, mut l1) = (BigUint::from(2u32), BigUint::one());
        for i in 0..400u64 {
            assert_eq!(fib(i), a, "F({i})");
            assert_eq!(lucas(i), l0, "L({i})");
            let next = &a + &b;
            a = std::mem::replace(&mut b, next);
            let next = &l0 + &l1;
            l0 = std::mem::replace(&mut l1, next);
        }
    }
}
