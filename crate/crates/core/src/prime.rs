//! Miller–Rabin primality and exact-width prime sampling.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rng::RandomState;

/// Witnesses that make Miller–Rabin exact below 3.186e23.
pub const DETERMINISTIC_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Rounds used above the deterministic bound.
pub const PROBABILISTIC_ROUNDS: usize = 64;

/// Seed of the witness stream for inputs above the deterministic bound.
pub const WITNESS_SEED: u64 = 0x7A75_5F4D_5F52_4F55;

/// Candidate cap for [`sample_prime`].
pub const PRIME_ATTEMPTS: u32 = 100_000;

fn deterministic_bound() -> BigUint {
    // 318_665_857_834_031_151_167_461 = 399165290221 * 798330580441 is the
    // smallest strong pseudoprime to all twelve bases.
    "318665857834031151167461".parse().unwrap()
}

const SMALL_PRIMES: [u64; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

pub fn is_prime(m: &BigUint) -> bool {
    if let Some(small) = m.to_u64() {
        return is_prime_u64(small);
    }
    for &sp in &SMALL_PRIMES {
        if (m % sp).is_zero() {
            return false;
        }
    }
    if *m < deterministic_bound() {
        return DETERMINISTIC_WITNESSES
            .iter()
            .all(|&a| strong_probable_prime_big(m, &BigUint::from(a)));
    }
    let mut rng = RandomState::new(WITNESS_SEED);
    let two = BigUint::from(2u8);
    let top = m - 1u8;
    (0..PROBABILISTIC_ROUNDS).all(|_| {
        let a = rng
            .draw_range(&two, &top)
            .expect("m > 2^64 leaves a nonempty witness range");
        strong_probable_prime_big(m, &a)
    })
}

pub fn is_prime_u64(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    for &sp in &SMALL_PRIMES {
        if m == sp {
            return true;
        }
        if m.is_multiple_of(sp) {
            return false;
        }
    }
    DETERMINISTIC_WITNESSES
        .iter()
        .all(|&a| strong_probable_prime_u64(m, a))
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
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

fn strong_probable_prime_u64(m: u64, a: u64) -> bool {
    let a = a % m;
    if a == 0 {
        return true;
    }
    let s = (m - 1).trailing_zeros();
    let d = (m - 1) >> s;
    let mut x = pow_mod(a, d, m);
    if x == 1 || x == m - 1 {
        return true;
    }
    for _ in 1..s {
        x = mul_mod(x, x, m);
        if x == m - 1 {
            return true;
        }
    }
    false
}

fn strong_probable_prime_big(m: &BigUint, a: &BigUint) -> bool {
    let m_minus_one = m - 1u8;
    let s = m_minus_one.trailing_zeros().unwrap_or(0);
    let d = &m_minus_one >> s;
    let mut x = a.modpow(&d, m);
    if x.is_one() || x == m_minus_one {
        return true;
    }
    for _ in 1..s {
        x = (&x * &x) % m;
        if x == m_minus_one {
            return true;
        }
    }
    false
}

/// Draws odd `width`-bit candidates (top and bottom bit forced) until one is prime.
pub fn sample_prime(rng: &mut RandomState, width: u32) -> Result<BigUint> {
    if width < 2 {
        return Err(Error::PrimeWidth(width));
    }
    if width <= 64 {
        return sample_prime_u64(rng, width).map(BigUint::from);
    }
    let top = BigUint::one() << (width - 1) as usize;
    for _ in 0..PRIME_ATTEMPTS {
        let mut c = rng.draw_bits(width)?;
        c |= &top;
        c.set_bit(0, true);
        if is_prime(&c) {
            return Ok(c);
        }
    }
    Err(Error::SamplingExhausted {
        width,
        attempts: PRIME_ATTEMPTS,
    })
}

/// `u64` form of [`sample_prime`] for `2 <= width <= 64`; identical draws.
pub fn sample_prime_u64(rng: &mut RandomState, width: u32) -> Result<u64> {
    if width < 2 {
        return Err(Error::PrimeWidth(width));
    }
    if width > 64 {
        return Err(Error::InvalidArgument(format!(
            "sample_prime_u64 supports width <= 64, got {width}"
        )));
    }
    let top = 1u64 << (width - 1);
    for _ in 0..PRIME_ATTEMPTS {
        let c = rng.draw_bits_u64(width)? | top | 1;
        if is_prime_u64(c) {
            return Ok(c);
        }
    }
    Err(Error::SamplingExhausted {
        width,
        attempts: PRIME_ATTEMPTS,
    })
}
