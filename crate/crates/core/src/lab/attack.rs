//! Uniform-guessing inverter and the report comparing its success rate with
//! the census ground truth and the polynomial envelopes `n^-c`.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::lab::preimage::{claimed_bit_probability, PreimageReport};
use crate::rng::RandomState;
use crate::tau::TauInstance;

/// Exponents `c` reported by default.
pub const DEFAULT_ENVELOPE_EXPONENTS: [u32; 3] = [1, 2, 3];

#[derive(Clone, Debug)]
pub struct AttackConfig {
    pub budget: u64,
    pub seed: u64,
    pub envelope_exponents: Vec<u32>,
}

impl AttackConfig {
    pub fn new(budget: u64, seed: u64) -> Self {
        Self {
            budget,
            seed,
            envelope_exponents: DEFAULT_ENVELOPE_EXPONENTS.to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttackerReport {
    /// Security parameter; stands in for the all-ones length marker.
    pub n: u32,
    pub trials: u64,
    pub successes: u64,
    /// `successes / trials`, absent when nothing was tried.
    pub estimate: Option<f64>,
    /// `|tau^-1(y)| / 2^n`, when a census is at hand.
    pub census_ratio: Option<f64>,
    /// `(c, n^-c)` pairs.
    pub envelopes: Vec<(u32, f64)>,
    /// `(1/8)^n`, reported next to the measurement and never asserted.
    pub paper_claim_per_bit: f64,
}

impl AttackerReport {
    /// Fills in the exact success probability of one uniform guess.
    pub fn with_census(mut self, census: &PreimageReport, y: u64) -> Result<Self> {
        if census.n() != self.n {
            return Err(Error::InvalidArgument(format!(
                "census is for n = {}, report for n = {}",
                census.n(),
                self.n
            )));
        }
        self.census_ratio = Some(census.ratio(y));
        Ok(self)
    }

    /// Binomial standard deviation of the estimate around `p`.
    pub fn sigma(&self, p: f64) -> Option<f64> {
        (self.trials > 0).then(|| (p * (1.0 - p) / self.trials as f64).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttackOutcome {
    /// First sampled input that maps to the target.
    pub witness: Option<BigUint>,
    pub report: AttackerReport,
}

/// Guesses `budget` uniform inputs, keeping count after the first hit so the
/// success rate is measured over the whole budget.
pub fn randomized_invert(tau: &TauInstance, y: &BigUint, config: &AttackConfig) -> Result<AttackOutcome> {
    let n = tau.n();
    if y.bits() > n as u64 {
        return Err(Error::out_of_range("y", format!("{y:#x} needs more than {n} bits")));
    }
    let mut rng = RandomState::new(config.seed);
    let mut witness = None;
    let mut successes = 0u64;

    if n <= 64 {
        let target = y.iter_u64_digits().next().unwrap_or(0);
        for _ in 0..config.budget {
            let x = rng.draw_bits_u64(n)?;
            if tau.evaluate_u64(x)? == target {
                successes += 1;
                witness.get_or_insert_with(|| BigUint::from(x));
            }
        }
    } else {
        for _ in 0..config.budget {
            let x = rng.draw_bits(n)?;
            if tau.evaluate(&x)? == *y {
                successes += 1;
                if witness.is_none() {
                    witness = Some(x);
                }
            }
        }
    }

    let trials = config.budget;
    let report = AttackerReport {
        n,
        trials,
        successes,
        estimate: (trials > 0).then(|| successes as f64 / trials as f64),
        census_ratio: None,
        envelopes: config
            .envelope_exponents
            .iter()
            .map(|&c| (c, (n as f64).powi(-(c as i32))))
            .collect(),
        paper_claim_per_bit: claimed_bit_probability(n),
    };
    Ok(AttackOutcome { witness, report })
}
