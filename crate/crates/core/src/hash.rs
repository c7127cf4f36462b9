//! Carter–Wegman hashes `((a*x + b) mod p) mod t` and the per-collection
//! uniqueness and independence constraints.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::prime::{is_prime, sample_prime};
use crate::rng::{digits_to_u32, RandomState};

/// Resampling cap for [`sample_hash`].
pub const HASH_ATTEMPTS: u32 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Small {
    a: u64,
    b: u64,
    p: u64,
}

/// One hash `((a*x + b) mod p) mod t`.
///
/// `p` is an odd prime, `0 < a, b < p` and `t >= 2`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HashParams {
    a: BigUint,
    b: BigUint,
    p: BigUint,
    t: u64,
    small: Option<Small>,
}

impl fmt::Debug for HashParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "h(a={}, b={}, p={}, t={})", self.a, self.b, self.p, self.t)
    }
}

impl HashParams {
    /// Validated constructor; checks primality of `p`.
    pub fn new(a: BigUint, b: BigUint, p: BigUint, t: u64) -> Result<Self> {
        if t < 2 {
            return Err(Error::HashParams(format!("modulus t = {t} must be >= 2")));
        }
        if p <= BigUint::from(2u8) || !is_prime(&p) {
            return Err(Error::HashParams(format!("p = {p} is not an odd prime")));
        }
        if a.is_zero() || a >= p {
            return Err(Error::HashParams(format!("a = {a} not in (0, {p})")));
        }
        if b.is_zero() || b >= p {
            return Err(Error::HashParams(format!("b = {b} not in (0, {p})")));
        }
        Ok(Self::assemble(a, b, p, t))
    }

    pub fn from_u64(a: u64, b: u64, p: u64, t: u64) -> Result<Self> {
        Self::new(a.into(), b.into(), p.into(), t)
    }

    fn assemble(a: BigUint, b: BigUint, p: BigUint, t: u64) -> Self {
        let small = match (a.to_u64(), b.to_u64(), p.to_u64()) {
            (Some(a), Some(b), Some(p)) => Some(Small { a, b, p }),
            _ => None,
        };
        Self { a, b, p, t, small }
    }

    pub fn a(&self) -> &BigUint {
        &self.a
    }

    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn p(&self) -> &BigUint {
        &self.p
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn eval(&self, x: &BigUint) -> u64 {
        match &self.small {
            Some(_) => self.eval_limbs(&x.to_u64_digits()),
            None => self.eval_big(x),
        }
    }

    pub fn eval_u64(&self, x: u64) -> u64 {
        self.eval_limbs(&[x])
    }

    /// Evaluates on a little-endian limb slice.
    pub fn eval_limbs(&self, limbs: &[u64]) -> u64 {
        match &self.small {
            Some(s) => {
                let p = s.p as u128;
                // reduce x mod p first; (a*x + b) mod p is unchanged
                let r = limbs
                    .iter()
                    .rev()
                    .fold(0u128, |r, &limb| ((r << 64) | limb as u128) % p);
                let v = (s.a as u128 * r + s.b as u128) % p;
                (v % self.t as u128) as u64
            }
            None => self.eval_big(&BigUint::from_slice(&digits_to_u32(limbs))),
        }
    }

    fn eval_big(&self, x: &BigUint) -> u64 {
        let v = (&self.a * x + &self.b) % &self.p;
        (v % self.t)
            .to_u64()
            .expect("residue mod t fits in u64")
    }
}

fn divides_evenly(big: &BigUint, small: &BigUint) -> Option<BigUint> {
    let (q, r) = big.div_rem(small);
    r.is_zero().then_some(q)
}

/// `(a1, b1) = k * (a2, b2)` for some positive integer `k`.
fn scalar_multiple(h1: &HashParams, h2: &HashParams) -> bool {
    match (divides_evenly(&h1.a, &h2.a), divides_evenly(&h1.b, &h2.b)) {
        (Some(ka), Some(kb)) => ka == kb,
        _ => false,
    }
}

/// True iff `h1` and `h2` may coexist in one collection: pairwise distinct
/// `a`, `b`, `p`, and neither affine form is an integer multiple of the other.
pub fn check_pair_constraints(h1: &HashParams, h2: &HashParams) -> bool {
    h1.a != h2.a
        && h1.b != h2.b
        && h1.p != h2.p
        && !scalar_multiple(h1, h2)
        && !scalar_multiple(h2, h1)
}

/// A set of hashes kept pairwise-constrained, with indices that make
/// admission checks independent of the collection size.
#[derive(Clone, Debug)]
pub struct HashCollection {
    name: &'static str,
    members: Vec<HashParams>,
    a_seen: HashSet<BigUint>,
    b_seen: HashSet<BigUint>,
    p_seen: HashSet<BigUint>,
    // reduced direction (a/g, b/g) -> every g seen with it
    directions: HashMap<(BigUint, BigUint), Vec<BigUint>>,
}

impl HashCollection {
    pub fn new(name: &'static str) -> Self {
        Self {
            name,
            members: Vec::new(),
            a_seen: HashSet::new(),
            b_seen: HashSet::new(),
            p_seen: HashSet::new(),
            directions: HashMap::new(),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn members(&self) -> &[HashParams] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn direction(h: &HashParams) -> ((BigUint, BigUint), BigUint) {
        let g = h.a.gcd(&h.b);
        ((&h.a / &g, &h.b / &g), g)
    }

    /// Same answer as `check_pair_constraints` against every member.
    pub fn admits(&self, h: &HashParams) -> bool {
        if self.a_seen.contains(&h.a) || self.b_seen.contains(&h.b) || self.p_seen.contains(&h.p)
        {
            return false;
        }
        let (dir, g) = Self::direction(h);
        match self.directions.get(&dir) {
            // same direction: proportional by an integer iff one gcd divides the other
            Some(gs) => !gs
                .iter()
                .any(|other| (&g % other).is_zero() || (other % &g).is_zero()),
            None => true,
        }
    }

    pub fn push(&mut self, h: HashParams) -> Result<()> {
        if !self.admits(&h) {
            return Err(Error::Invariant(format!(
                "{h:?} violates uniqueness/independence within {}",
                self.name
            )));
        }
        let (dir, g) = Self::direction(&h);
        self.a_seen.insert(h.a.clone());
        self.b_seen.insert(h.b.clone());
        self.p_seen.insert(h.p.clone());
        self.directions.entry(dir).or_default().push(g);
        self.members.push(h);
        Ok(())
    }

    pub fn into_members(self) -> Vec<HashParams> {
        self.members
    }
}

/// Samples `p` of exactly `width` bits, then `a, b` uniform in `[1, p)`,
/// redrawing the whole triple until `existing` admits it.
pub fn sample_hash(
    rng: &mut RandomState,
    width: u32,
    t: u64,
    existing: &HashCollection,
) -> Result<HashParams> {
    if t < 2 {
        return Err(Error::HashParams(format!("modulus t = {t} must be >= 2")));
    }
    for _ in 0..HASH_ATTEMPTS {
        let p = sample_prime(rng, width)?;
        let (a, b) = match p.to_u64() {
            Some(ps) => (
                BigUint::from(rng.draw_range_u64(1, ps)?),
                BigUint::from(rng.draw_range_u64(1, ps)?),
            ),
            None => {
                let one = BigUint::from(1u8);
                (rng.draw_range(&one, &p)?, rng.draw_range(&one, &p)?)
            }
        };
        let h = HashParams::assemble(a, b, p, t);
        if existing.admits(&h) {
            return Ok(h);
        }
    }
    Err(Error::ConstraintExhausted {
        collection: existing.name(),
        width,
        attempts: HASH_ATTEMPTS,
    })
}

/// Samples `count` hashes into a fresh, pairwise-constrained collection.
pub fn sample_collection(
    rng: &mut RandomState,
    name: &'static str,
    count: usize,
    width: u32,
    t: u64,
) -> Result<Vec<HashParams>> {
    let mut coll = HashCollection::new(name);
    for _ in 0..count {
        let h = sample_hash(rng, width, t, &coll)?;
        coll.push(h)?;
    }
    Ok(coll.into_members())
}

/// Checks every pair of `members`; returns the first offending index pair.
pub fn validate_collection(name: &'static str, members: &[HashParams]) -> Result<()> {
    let mut coll = HashCollection::new(name);
    for (i, h) in members.iter().enumerate() {
        if !coll.admits(h) {
            let j = members[..i]
                .iter()
                .position(|m| !check_pair_constraints(m, h))
                .unwrap_or(0);
            return Err(Error::Invariant(format!(
                "{name}: members {j} and {i} violate uniqueness/independence"
            )));
        }
        coll.push(h.clone())?;
    }
    Ok(())
}

/// Settings for [`estimate_collision_probability`].
#[derive(Clone, Debug)]
pub struct CollisionTrial {
    pub n_bits: u32,
    pub t: u64,
    pub pair_count: u64,
    pub hashes_per_pair: u64,
    /// Width of sampled primes; `max(n_bits, 12)` when `None`, matching the
    /// instance default.
    pub prime_width: Option<u32>,
}

/// Fraction of (pair, hash) trials where a fresh hash maps two distinct
/// random keys to the same value.
pub fn estimate_collision_probability(rng: &mut RandomState, trial: &CollisionTrial) -> Result<f64> {
    if trial.n_bits == 0 || trial.n_bits > 64 {
        return Err(Error::out_of_range(
            "n_bits",
            format!("{} (need 1..=64 to form distinct pairs)", trial.n_bits),
        ));
    }
    if trial.t < 2 {
        return Err(Error::HashParams(format!("modulus t = {} must be >= 2", trial.t)));
    }
    if trial.pair_count == 0 || trial.hashes_per_pair == 0 {
        return Err(Error::InvalidArgument(
            "pair_count and hashes_per_pair must be positive".into(),
        ));
    }
    let width = trial.prime_width.unwrap_or(trial.n_bits.max(12));
    let fresh = HashCollection::new("collision-trial");
    let mut hits = 0u64;
    for _ in 0..trial.pair_count {
        let x = rng.draw_bits_u64(trial.n_bits)?;
        let y = loop {
            let y = rng.draw_bits_u64(trial.n_bits)?;
            if y != x {
                break y;
            }
        };
        for _ in 0..trial.hashes_per_pair {
            let h = sample_hash(rng, width, trial.t, &fresh)?;
            if h.eval_u64(x) == h.eval_u64(y) {
                hits += 1;
            }
        }
    }
    Ok(hits as f64 / (trial.pair_count * trial.hashes_per_pair) as f64)
}
