//! Primality tests used when validating group parameters.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};

/// Rounds of Miller-Rabin applied to large candidates.
pub const MILLER_RABIN_ROUNDS: usize = 40;

/// Deterministic trial division. Only sensible for small inputs.
pub fn is_prime_trial_division(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Miller-Rabin with `rounds` witnesses drawn uniformly from `[2, n-2]`.
///
/// Witnesses come from a ChaCha stream keyed by the candidate itself, so the
/// verdict for a given `n` is reproducible.
pub fn is_probable_prime(n: &BigUint, rounds: usize) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 1 << 20 {
            return is_prime_trial_division(small);
        }
    }
    if n.is_even() {
        return false;
    }
    for p in [3u32, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if (n % p).is_zero() {
            return false;
        }
    }

    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let mut seed = [0u8; 32];
    for (i, b) in n.to_bytes_le().iter().enumerate() {
        seed[i % 32] ^= b;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let span = n - 3u32; // witnesses in [2, n-2]
    let width = (span.bits() as usize).div_ceil(8);
    let mut buf = alloc::vec![0u8; width];

    'witness: for _ in 0..rounds {
        let a = loop {
            rng.fill_bytes(&mut buf);
            let candidate = BigUint::from_bytes_be(&buf) & ((&one << span.bits()) - &one);
            if candidate <= span {
                break candidate + 2u32;
            }
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_division_small_values() {
        let primes: alloc::vec::Vec<u64> = (0..40).filter(|&n| is_prime_trial_division(n)).collect();
        assert_eq!(primes, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
    }

    #[test]
    fn miller_rabin_agrees_with_trial_division() {
        for n in (1u64 << 20)..(1u64 << 20) + 2000 {
            assert_eq!(is_probable_prime(&BigUint::from(n), 20), is_prime_trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_rejects_carmichael_and_mersenne_composites() {
        // 561 is small enough for trial division; the others exercise the witness loop.
        for n in [561u64, 41041, 825265, 321197185, 5394826801, 232250619601] {
            assert!(!is_probable_prime(&BigUint::from(n), MILLER_RABIN_ROUNDS), "{n}");
        }
        let m61 = (BigUint::one() << 61u32) - 1u32;
        assert!(is_probable_prime(&m61, MILLER_RABIN_ROUNDS));
        let m67 = (BigUint::one() << 67u32) - 1u32;
        assert!(!is_probable_prime(&m67, MILLER_RABIN_ROUNDS));
    }
}
