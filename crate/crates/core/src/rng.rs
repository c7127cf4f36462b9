//! Seedable SplitMix64 stream and the bit/range draws built on it.
//!
//! Every random choice in the crate goes through [`RandomState`], so a seed
//! fully determines an instance on every platform. Multi-word draws put the
//! first word in the most significant position.

use num_bigint::BigUint;

use crate::error::{Error, Result};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 generator state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomState {
    state: u64,
}

impl RandomState {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn state(&self) -> u64 {
        self.state
    }

    pub fn next_word(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform integer below `2^k`, assembled from `ceil(k/64)` words.
    pub fn draw_bits(&mut self, k: u32) -> Result<BigUint> {
        if k == 0 {
            return Err(Error::ZeroBits);
        }
        let words = k.div_ceil(64) as usize;
        // BigUint digits are little-endian; the first draw is the top block.
        let mut digits = vec![0u64; words];
        for slot in digits.iter_mut().rev() {
            *slot = self.next_word();
        }
        let spare = words as u32 * 64 - k;
        if spare > 0 {
            digits[words - 1] &= u64::MAX >> spare;
        }
        Ok(BigUint::from_slice(&digits_to_u32(&digits)))
    }

    /// Single-word form of [`draw_bits`](Self::draw_bits) for `k <= 64`.
    /// Consumes the stream identically.
    pub fn draw_bits_u64(&mut self, k: u32) -> Result<u64> {
        if k == 0 {
            return Err(Error::ZeroBits);
        }
        if k > 64 {
            return Err(Error::InvalidArgument(format!(
                "draw_bits_u64 supports k <= 64, got {k}"
            )));
        }
        Ok(self.next_word() & mask(k))
    }

    /// Uniform integer in `[lo, hi)` by rejection on `bit_length(hi - lo)` bits.
    pub fn draw_range(&mut self, lo: &BigUint, hi: &BigUint) -> Result<BigUint> {
        if lo >= hi {
            return Err(Error::EmptyRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        let span = hi - lo;
        let k = span.bits() as u32;
        loop {
            let v = self.draw_bits(k)?;
            if v < span {
                return Ok(lo + v);
            }
        }
    }

    /// `u64` form of [`draw_range`](Self::draw_range); same stream consumption.
    pub fn draw_range_u64(&mut self, lo: u64, hi: u64) -> Result<u64> {
        if lo >= hi {
            return Err(Error::EmptyRange {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        let span = hi - lo;
        let k = 64 - span.leading_zeros();
        loop {
            let v = self.draw_bits_u64(k)?;
            if v < span {
                return Ok(lo + v);
            }
        }
    }

    /// Derives an independent child stream seeded from the next word.
    pub fn fork(&mut self) -> RandomState {
        RandomState::new(self.next_word())
    }
}

pub(crate) fn mask(k: u32) -> u64 {
    if k >= 64 {
        u64::MAX
    } else {
        (1u64 << k) - 1
    }
}

pub(crate) fn digits_to_u32(digits: &[u64]) -> Vec<u32> {
    digits
        .iter()
        .flat_map(|&d| [d as u32, (d >> 32) as u32])
        .collect()
}
