//! Exhaustive preimage search, hash preimages and whole-domain censuses.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hash::HashParams;
use crate::limits::{guard, Limits};
use crate::tau::TauInstance;

/// Chunk size for splitting a domain across workers.
const CHUNK: u64 = 1 << 12;

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}

fn domain_size(n: u32) -> Result<u64> {
    if n >= 64 {
        return Err(Error::InvalidArgument(format!(
            "cannot enumerate a domain of 2^{n} inputs"
        )));
    }
    Ok(1u64 << n)
}

fn chunks(size: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    (0..size.div_ceil(CHUNK))
        .into_par_iter()
        .map(move |c| c * CHUNK..((c + 1) * CHUNK).min(size))
}

/// Every `x` with `tau(x) = y`; empty when `y` is outside the image.
pub fn brute_force_preimage(tau: &TauInstance, y: u64, limits: &Limits) -> Result<BTreeSet<u64>> {
    let n = tau.n();
    guard("brute-force preimage", n, limits.brute_force_n)?;
    let size = domain_size(n)?;
    if y >= size {
        return Err(Error::out_of_range("y", format!("{y:#x} needs more than {n} bits")));
    }
    let found: Vec<u64> = chunks(size)
        .flat_map_iter(|range| {
            range.filter(move |&x| tau.evaluate_u64(x).expect("x in domain") == y)
        })
        .collect();
    Ok(found.into_iter().collect())
}

/// Every `x` in `[0, 2^n)` with `h(x) = m`.
pub fn h_inv(h: &HashParams, m: u64, n: u32, limits: &Limits) -> Result<BTreeSet<u64>> {
    if m >= h.t() {
        return Err(Error::out_of_range("m", format!("{m} >= t = {}", h.t())));
    }
    guard("h-inv", n, limits.h_inv_n)?;
    let size = domain_size(n)?;
    Ok((0..size).filter(|&x| h.eval_u64(x) == m).collect())
}

/// Preimage size of every `m` in `[0, t)` in one pass.
pub fn h_inv_sizes(h: &HashParams, n: u32, limits: &Limits) -> Result<Vec<u64>> {
    guard("h-inv", n, limits.h_inv_n)?;
    let size = domain_size(n)?;
    let t = usize::try_from(h.t())
        .ok()
        .filter(|&t| t <= 1 << 24)
        .ok_or_else(|| Error::InvalidArgument(format!("modulus {} too large to tabulate", h.t())))?;
    let mut sizes = vec![0u64; t];
    for x in 0..size {
        sizes[h.eval_u64(x) as usize] += 1;
    }
    Ok(sizes)
}

/// Size every hash preimage would have if outputs were spread evenly:
/// `2^n / t`.
pub fn uniform_preimage_size(n: u32, t: u64) -> f64 {
    2f64.powi(n as i32) / t as f64
}

/// Exhaustive tally of `tau` over its whole domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageReport {
    n: u32,
    counts: BTreeMap<u64, u64>,
    witnesses: BTreeMap<u64, u64>,
    // inputs whose output bit i (1-based, index i - 1) is one
    ones: Vec<u64>,
    total: u64,
}

impl PreimageReport {
    /// Builds a synthetic report from an output histogram. Such reports carry
    /// no witnesses.
    pub fn from_counts(n: u32, counts: BTreeMap<u64, u64>) -> Result<Self> {
        let size = domain_size(n)?;
        let total: u64 = counts.values().sum();
        if total != size {
            return Err(Error::Invariant(format!("counts sum to {total}, not 2^{n}")));
        }
        let mut ones = vec![0u64; n as usize];
        for (&y, &c) in &counts {
            if y >= size {
                return Err(Error::out_of_range("y", format!("{y:#x}")));
            }
            for (i, slot) in ones.iter_mut().enumerate() {
                if y >> (n as usize - 1 - i) & 1 == 1 {
                    *slot += c;
                }
            }
        }
        let counts: BTreeMap<u64, u64> = counts.into_iter().filter(|&(_, c)| c > 0).collect();
        Ok(Self {
            n,
            counts,
            witnesses: BTreeMap::new(),
            ones,
            total,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Preimage size of each output that occurs, ascending by output.
    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn count(&self, y: u64) -> u64 {
        self.counts.get(&y).copied().unwrap_or(0)
    }

    /// Smallest input reaching `y`.
    pub fn witness(&self, y: u64) -> Option<u64> {
        self.witnesses.get(&y).copied()
    }

    pub fn distinct_outputs(&self) -> usize {
        self.counts.len()
    }

    /// Number of inputs whose output bit `i` (1-based) equals `v`.
    pub fn bit_count(&self, i: u32, v: bool) -> Result<u64> {
        self.check_bit(i)?;
        let ones = self.ones[i as usize - 1];
        Ok(if v { ones } else { self.total - ones })
    }

    /// `freq(i, v)`: fraction of inputs whose output bit `i` equals `v`.
    pub fn freq(&self, i: u32, v: bool) -> Result<f64> {
        Ok(self.bit_count(i, v)? as f64 / self.total as f64)
    }

    /// `|tau^-1(y)| / 2^n`.
    pub fn ratio(&self, y: u64) -> f64 {
        self.count(y) as f64 / self.total as f64
    }

    fn check_bit(&self, i: u32) -> Result<()> {
        if i == 0 || i > self.n {
            return Err(Error::out_of_range("bit index", format!("{i} not in 1..={}", self.n)));
        }
        Ok(())
    }

    fn bit(&self, y: u64, i: u32) -> bool {
        y >> (self.n - i) & 1 == 1
    }
}

#[derive(Default)]
struct Tally {
    counts: BTreeMap<u64, u64>,
    witnesses: BTreeMap<u64, u64>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        for (y, c) in other.counts {
            *self.counts.entry(y).or_default() += c;
        }
        for (y, x) in other.witnesses {
            self.witnesses
                .entry(y)
                .and_modify(|w| *w = (*w).min(x))
                .or_insert(x);
        }
        self
    }
}

/// Evaluates every input once. Work is split into fixed chunks whose tallies
/// merge by addition, so the report does not depend on the worker count.
pub fn preimage_census(tau: &TauInstance, limits: &Limits) -> Result<PreimageReport> {
    let n = tau.n();
    guard("census", n, limits.census_n)?;
    let size = domain_size(n)?;
    let tally = chunks(size)
        .map(|range| {
            let mut t = Tally::default();
            for x in range {
                let y = tau.evaluate_u64(x).expect("x in domain");
                *t.counts.entry(y).or_default() += 1;
                t.witnesses.entry(y).or_insert(x);
            }
            t
        })
        .reduce(Tally::default, Tally::merge);

    let mut ones = vec![0u64; n as usize];
    for (&y, &c) in &tally.counts {
        for (i, slot) in ones.iter_mut().enumerate() {
            if y >> (n as usize - 1 - i) & 1 == 1 {
                *slot += c;
            }
        }
    }
    Ok(PreimageReport {
        n,
        counts: tally.counts,
        witnesses: tally.witnesses,
        ones,
        total: size,
    })
}

/// `Pr[y_i = v]` over a uniform input.
pub fn bit_event_probability(census: &PreimageReport, i: u32, v: bool) -> Result<f64> {
    census.freq(i, v)
}

/// Value the per-bit event is claimed to have: `(1/8)^n`.
pub fn claimed_bit_probability(n: u32) -> f64 {
    0.125f64.powi(n as i32)
}

/// Probability of a fair coin; the natural null model for one output bit.
pub const NULL_MODEL_BIT_PROBABILITY: f64 = 0.5;

/// `Pr[y_i = v_i | y_j = v_j]`; `None` when no input has `y_j = v_j`.
pub fn conditional_bit_probability(
    census: &PreimageReport,
    i: u32,
    j: u32,
    v_i: bool,
    v_j: bool,
) -> Result<Option<f64>> {
    census.check_bit(i)?;
    census.check_bit(j)?;
    if i == j {
        return Err(Error::InvalidArgument(format!(
            "conditioning bit equals target bit ({i})"
        )));
    }
    let (mut joint, mut support) = (0u64, 0u64);
    for (&y, &c) in census.counts() {
        if census.bit(y, j) == v_j {
            support += c;
            if census.bit(y, i) == v_i {
                joint += c;
            }
        }
    }
    Ok((support > 0).then(|| joint as f64 / support as f64))
}

/// `Pr[y_i = target_i | y_k = target_k for every k != i]`; `None` when the
/// conditioning event is empty.
pub fn conditional_on_others(census: &PreimageReport, i: u32, target: u64) -> Result<Option<f64>> {
    census.check_bit(i)?;
    let flip = 1u64 << (census.n() - i);
    let hit = census.count(target);
    let miss = census.count(target ^ flip);
    let support = hit + miss;
    Ok((support > 0).then(|| hit as f64 / support as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_support::hand_instance;

    #[test]
    fn hand_instance_inverse_table() {
        let tau = hand_instance();
        let lim = Limits::default();
        assert!(brute_force_preimage(&tau, 0, &lim).unwrap().is_empty());
        assert_eq!(brute_force_preimage(&tau, 1, &lim).unwrap(), BTreeSet::from([0, 2]));
        assert_eq!(brute_force_preimage(&tau, 2, &lim).unwrap(), BTreeSet::from([3]));
        assert_eq!(brute_force_preimage(&tau, 3, &lim).unwrap(), BTreeSet::from([1]));
        assert!(brute_force_preimage(&tau, 4, &lim).is_err());
    }

    #[test]
    fn hand_instance_census() {
        let c = preimage_census(&hand_instance(), &Limits::default()).unwrap();
        assert_eq!(c.total(), 4);
        assert_eq!(c.counts(), &BTreeMap::from([(1, 2), (2, 1), (3, 1)]));
        assert_eq!(c.witness(1), Some(0));
        assert_eq!(c.witness(2), Some(3));
        // outputs 1, 3, 1, 2 -> bit 1 set for 3 and 2, bit 2 set for 1, 3, 1
        assert_eq!(c.freq(1, true).unwrap(), 0.5);
        assert_eq!(c.freq(2, true).unwrap(), 0.75);
        assert_eq!(c.freq(2, false).unwrap(), 0.25);
    }

    #[test]
    fn preimage_contains_source() {
        let tau = TauInstance::construct(8, 11, None).unwrap();
        for x in [0u64, 1, 77, 200, 255] {
            let y = tau.evaluate_u64(x).unwrap();
            assert!(brute_force_preimage(&tau, y, &Limits::default()).unwrap().contains(&x));
        }
    }

    #[test]
    fn guards_apply() {
        let tau = TauInstance::construct(32, 1, Some(32)).unwrap();
        assert!(matches!(
            preimage_census(&tau, &Limits::default()),
            Err(Error::Guard { limit: 20, .. })
        ));
        assert!(matches!(
            brute_force_preimage(&tau, 0, &Limits::default()),
            Err(Error::Guard { limit: 24, .. })
        ));
    }

    #[test]
    fn h_inv_worked_example() {
        let h = HashParams::from_u64(1, 1, 5, 2).unwrap();
        let lim = Limits::default();
        assert_eq!(h_inv(&h, 1, 3, &lim).unwrap(), BTreeSet::from([0, 2, 5, 7]));
        assert_eq!(h_inv(&h, 0, 3, &lim).unwrap(), BTreeSet::from([1, 3, 4, 6]));
        assert!(h_inv(&h, 2, 3, &lim).is_err());
        assert_eq!(h_inv_sizes(&h, 3, &lim).unwrap(), vec![4, 4]);
    }

    #[test]
    fn h_inv_sizes_partition_domain() {
        let h = HashParams::from_u64(1234, 567, 4093, 8).unwrap();
        let sizes = h_inv_sizes(&h, 12, &Limits::default()).unwrap();
        assert_eq!(sizes.iter().sum::<u64>(), 1 << 12);
        for s in sizes {
            let expected = uniform_preimage_size(12, 8);
            assert!((s as f64 - expected).abs() / expected < 0.05, "{s}");
        }
    }

    #[test]
    fn worker_count_does_not_change_census() {
        let tau = TauInstance::construct(16, 3, None).unwrap();
        let lim = Limits::default();
        let one = with_workers(Some(1), || preimage_census(&tau, &lim).unwrap());
        let four = with_workers(Some(4), || preimage_census(&tau, &lim).unwrap());
        assert_eq!(one, four);
        assert_eq!(one.counts().values().sum::<u64>(), 1 << 16);
    }

    #[test]
    fn conditional_no_data_and_independence() {
        // bit 1 is always 0: conditioning on it being 1 has no support
        let skewed = PreimageReport::from_counts(2, BTreeMap::from([(0, 2), (1, 2)])).unwrap();
        assert_eq!(conditional_bit_probability(&skewed, 2, 1, true, true).unwrap(), None);
        assert_eq!(conditional_bit_probability(&skewed, 2, 1, true, false).unwrap(), Some(0.5));

        let uniform =
            PreimageReport::from_counts(2, BTreeMap::from([(0, 1), (1, 1), (2, 1), (3, 1)]))
                .unwrap();
        for (vi, vj) in [(false, false), (false, true), (true, false), (true, true)] {
            assert_eq!(
                conditional_bit_probability(&uniform, 1, 2, vi, vj).unwrap(),
                Some(0.5)
            );
        }
        assert!(conditional_bit_probability(&uniform, 1, 1, true, true).is_err());
        assert!(conditional_bit_probability(&uniform, 3, 1, true, true).is_err());
    }

    #[test]
    fn conditional_on_all_other_bits() {
        let c = PreimageReport::from_counts(2, BTreeMap::from([(0, 1), (1, 3)])).unwrap();
        // others = bit 1 = 0: outputs 0 (count 1) and 1 (count 3)
        assert_eq!(conditional_on_others(&c, 2, 1).unwrap(), Some(0.75));
        assert_eq!(conditional_on_others(&c, 2, 0).unwrap(), Some(0.25));
        assert_eq!(conditional_on_others(&c, 2, 3).unwrap(), None);
    }

    #[test]
    fn constant_matrix_gives_constant_bit() {
        let tau = crate::test_support::instance_with_all_ones_matrix(2);
        let c = preimage_census(&tau, &Limits::default()).unwrap();
        assert_eq!(bit_event_probability(&c, 2, true).unwrap(), 1.0);
        assert_eq!(bit_event_probability(&c, 2, false).unwrap(), 0.0);
    }

    #[test]
    fn from_counts_rejects_wrong_total() {
        assert!(PreimageReport::from_counts(2, BTreeMap::from([(0, 3)])).is_err());
    }

    #[test]
    fn claimed_value() {
        assert_eq!(claimed_bit_probability(8), 8f64.powi(-8));
    }
}
