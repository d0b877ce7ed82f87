use num_bigint::BigUint;
use num_traits::{One, Zero};

/// `floor(sqrt(n))` by integer Newton iteration.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // 2^ceil(bits/2) is never below the root, so the iteration decreases monotonically
    let mut x = BigUint::one() << n.bits().div_ceil(2);
    loop {
        let y = (&x + n / &x) >> 1u8;
        if y >= x {
            break;
        }
        x = y;
    }
    let next = &x + 1u32;
    assert!(&x * &x <= *n && *n < &next * &next, "isqrt post-check failed");
    x
}

/// The exact square root when `n` is a perfect square.
pub fn exact_sqrt(n: &BigUint) -> Option<BigUint> {
    // quadratic residues mod 64 reject most non-squares cheaply
    let low = n.iter_u32_digits().next().unwrap_or(0) & 63;
    if (0x0202_0212_0203_0213u64 >> low) & 1 == 0 {
        return None;
    }
    let r = isqrt(n);
    (&r * &r == *n).then_some(r)
}

pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn exact_sqrt_u128(n: u128) -> Option<u128> {
    let r = isqrt_u128(n);
    (r * r == n).then_some(r)
}
