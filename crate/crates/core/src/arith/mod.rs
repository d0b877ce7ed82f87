//! Arbitrary-precision arithmetic services.

mod factor;
mod fib;
mod isqrt;
mod primality;
mod sigma;

pub use factor::{factorize, factorize_with, FactorConfig, Factorization, PrimePower};
pub use fib::{fib, fib_pair, is_fibonacci, lucas};
pub use isqrt::{exact_sqrt, exact_sqrt_u128, isqrt, isqrt_u128};
pub use primality::{
    is_prime, is_prime_u64, is_prime_with, PrimalityConfig, PrimalityResult, Verdict,
};
pub use sigma::{
    prime_power_sigma, proper_power_sum, proper_power_sum_with, sigma, sigma_from_factorization,
    sigma_mod, sigma_small, sigma_with,
};
