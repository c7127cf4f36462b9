//! Tau instances: random bit matrices walked by hash-selected directions.
//!
//! Output bit `i` starts at `(h_row[i](x) + 1, h_col[i](x) + 1)` on matrix
//! `i`, takes `n` steps chosen by `h_m[i][j](x)` through [`DIRECTIONS`] on the
//! torus `[1, n] x [1, n]`, and emits the bit under the final cell. Bit 1 is
//! the most significant bit of the output.

use std::collections::HashSet;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::hash::{sample_collection, validate_collection, HashParams};
use crate::rng::{digits_to_u32, RandomState};

/// Step table indexed by `d - 1` for `d` in `1..=8`, stored verbatim as
/// `(row delta, column delta)`.
pub const DIRECTIONS: [(i8, i8); 8] = [
    (1, 0),
    (-1, 0),
    (0, -1),
    (0, 1),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

/// Modulus of the direction hashes.
pub const DIRECTION_MODULUS: u64 = 8;

/// Smallest prime width used when none is given.
pub const MIN_DEFAULT_PRIME_WIDTH: u32 = 12;

pub fn default_prime_width(n: u32) -> u32 {
    n.max(MIN_DEFAULT_PRIME_WIDTH)
}

pub fn check_size(n: u32) -> Result<()> {
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(())
}

/// Square bit matrix. Column 1 is the most significant bit of a row.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    n: u32,
    words_per_row: usize,
    // row-major; within a row, little-endian limbs of the row integer
    words: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(n: u32) -> Self {
        let words_per_row = n.div_ceil(64) as usize;
        Self {
            n,
            words_per_row,
            words: vec![0; words_per_row * n as usize],
        }
    }

    /// Builds from row integers (column 1 = most significant of `n` bits).
    pub fn from_rows(n: u32, rows: &[BigUint]) -> Result<Self> {
        if rows.len() != n as usize {
            return Err(Error::Invariant(format!(
                "matrix has {} rows, expected {n}",
                rows.len()
            )));
        }
        let mut m = Self::zeros(n);
        for (r, row) in rows.iter().enumerate() {
            if row.bits() > n as u64 {
                return Err(Error::Invariant(format!("row {} wider than {n} bits", r + 1)));
            }
            for (k, limb) in row.to_u64_digits().into_iter().enumerate() {
                m.words[r * m.words_per_row + k] = limb;
            }
        }
        Ok(m)
    }

    pub fn from_bits(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len() as u32;
        let mut m = Self::zeros(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n as usize {
                return Err(Error::Invariant("matrix is not square".into()));
            }
            for (c, &bit) in row.iter().enumerate() {
                m.set(r as u32, c as u32, bit != 0);
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    fn locate(&self, r: u32, c: u32) -> (usize, u32) {
        let k = self.n - 1 - c;
        (r as usize * self.words_per_row + (k / 64) as usize, k % 64)
    }

    /// Zero-based access.
    pub fn get(&self, r: u32, c: u32) -> bool {
        let (w, b) = self.locate(r, c);
        self.words[w] >> b & 1 == 1
    }

    pub fn set(&mut self, r: u32, c: u32, v: bool) {
        let (w, b) = self.locate(r, c);
        if v {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    /// Row as an integer, column 1 most significant. Zero-based `r`.
    pub fn row(&self, r: u32) -> BigUint {
        let start = r as usize * self.words_per_row;
        BigUint::from_slice(&digits_to_u32(&self.words[start..start + self.words_per_row]))
    }

    fn random(rng: &mut RandomState, n: u32) -> Result<Self> {
        let mut m = Self::zeros(n);
        for r in 0..n as usize {
            let row = rng.draw_bits(n)?;
            for (k, limb) in row.to_u64_digits().into_iter().enumerate() {
                m.words[r * m.words_per_row + k] = limb;
            }
        }
        Ok(m)
    }
}

/// Path of one output bit. Coordinates are 1-based `(row, col)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitTrace {
    pub start: (u32, u32),
    /// Direction indices in `1..=8`.
    pub directions: Vec<u8>,
    /// Cell after each step.
    pub visited: Vec<(u32, u32)>,
    pub bit: bool,
}

impl BitTrace {
    pub fn end(&self) -> (u32, u32) {
        *self.visited.last().unwrap_or(&self.start)
    }
}

/// A fully materialized instance. Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauInstance {
    n: u32,
    prime_width: u32,
    seed: Option<u64>,
    matrices: Vec<BitMatrix>,
    h_row: Vec<HashParams>,
    h_col: Vec<HashParams>,
    h_m: Vec<Vec<HashParams>>,
}

/// Moves one coordinate by `delta` on `[1, n]`, re-entering from the other edge.
fn step_coordinate(v: u32, delta: i8, n: u32) -> u32 {
    let moved = v as i64 + delta as i64;
    let wrapped = if moved < 1 {
        n as i64
    } else if moved > n as i64 {
        1
    } else {
        moved
    };
    debug_assert_eq!(
        wrapped,
        (v as i64 - 1 + delta as i64).rem_euclid(n as i64) + 1
    );
    wrapped as u32
}

impl TauInstance {
    pub fn construct(n: u32, seed: u64, prime_width: Option<u32>) -> Result<Self> {
        check_size(n)?;
        let width = prime_width.unwrap_or_else(|| default_prime_width(n));
        let mut root = RandomState::new(seed);
        let mut matrix_rng = root.fork();
        let mut row_rng = root.fork();
        let mut col_rng = root.fork();
        let mut dir_rng = root.fork();

        let mut matrices = Vec::with_capacity(n as usize);
        let mut seen = HashSet::new();
        while matrices.len() < n as usize {
            let m = BitMatrix::random(&mut matrix_rng, n)?;
            if seen.insert(m.clone()) {
                matrices.push(m);
            }
        }

        let t = n as u64;
        let h_row = sample_collection(&mut row_rng, "h_row", n as usize, width, t)?;
        let h_col = sample_collection(&mut col_rng, "h_col", n as usize, width, t)?;
        let flat = sample_collection(
            &mut dir_rng,
            "h_m",
            (n * n) as usize,
            width,
            DIRECTION_MODULUS,
        )?;
        let h_m = flat.chunks(n as usize).map(<[_]>::to_vec).collect();

        Ok(Self {
            n,
            prime_width: width,
            seed: Some(seed),
            matrices,
            h_row,
            h_col,
            h_m,
        })
    }

    /// Assembles an instance from explicit parts and checks every invariant.
    pub fn from_parts(
        n: u32,
        prime_width: u32,
        seed: Option<u64>,
        matrices: Vec<BitMatrix>,
        h_row: Vec<HashParams>,
        h_col: Vec<HashParams>,
        h_m: Vec<Vec<HashParams>>,
    ) -> Result<Self> {
        let tau = Self {
            n,
            prime_width,
            seed,
            matrices,
            h_row,
            h_col,
            h_m,
        };
        tau.validate()?;
        Ok(tau)
    }

    /// Re-checks sizes, matrix distinctness, moduli and hash constraints.
    pub fn validate(&self) -> Result<()> {
        let n = self.n;
        check_size(n)?;
        if self.prime_width < 2 {
            return Err(Error::PrimeWidth(self.prime_width));
        }
        if self.matrices.len() != n as usize {
            return Err(Error::Invariant(format!(
                "expected {n} matrices, found {}",
                self.matrices.len()
            )));
        }
        let mut seen = HashSet::new();
        for (i, m) in self.matrices.iter().enumerate() {
            if m.n() != n {
                return Err(Error::Invariant(format!("matrix {} is not {n}x{n}", i + 1)));
            }
            if !seen.insert(m) {
                return Err(Error::Invariant(format!(
                    "matrix distinctness: matrix {} duplicates an earlier matrix",
                    i + 1
                )));
            }
        }
        let check_moduli = |name: &str, hs: &[HashParams], t: u64| -> Result<()> {
            if hs.len() != n as usize {
                return Err(Error::Invariant(format!(
                    "{name} has {} hashes, expected {n}",
                    hs.len()
                )));
            }
            match hs.iter().position(|h| h.t() != t) {
                Some(i) => Err(Error::Invariant(format!(
                    "{name}[{}] has modulus {}, expected {t}",
                    i + 1,
                    hs[i].t()
                ))),
                None => Ok(()),
            }
        };
        check_moduli("h_row", &self.h_row, n as u64)?;
        check_moduli("h_col", &self.h_col, n as u64)?;
        if self.h_m.len() != n as usize {
            return Err(Error::Invariant(format!("h_m has {} rows, expected {n}", self.h_m.len())));
        }
        for row in &self.h_m {
            check_moduli("h_m row", row, DIRECTION_MODULUS)?;
        }
        validate_collection("h_row", &self.h_row)?;
        validate_collection("h_col", &self.h_col)?;
        let flat: Vec<HashParams> = self.h_m.iter().flatten().cloned().collect();
        validate_collection("h_m", &flat)?;
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn prime_width(&self) -> u32 {
        self.prime_width
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn matrices(&self) -> &[BitMatrix] {
        &self.matrices
    }

    pub fn h_row(&self) -> &[HashParams] {
        &self.h_row
    }

    pub fn h_col(&self) -> &[HashParams] {
        &self.h_col
    }

    pub fn h_m(&self) -> &[Vec<HashParams>] {
        &self.h_m
    }

    fn check_input(&self, x: &BigUint) -> Result<()> {
        if x.bits() > self.n as u64 {
            return Err(Error::out_of_range(
                "x",
                format!("{x:#x} needs more than {} bits", self.n),
            ));
        }
        Ok(())
    }

    /// Walks for output bit `i` (zero-based), optionally recording the path.
    fn walk(&self, i: usize, x: &[u64], mut trace: Option<&mut BitTrace>) -> bool {
        let n = self.n;
        let mut r = self.h_row[i].eval_limbs(x) as u32 + 1;
        let mut c = self.h_col[i].eval_limbs(x) as u32 + 1;
        if let Some(t) = trace.as_deref_mut() {
            t.start = (r, c);
        }
        for h in &self.h_m[i] {
            let d = h.eval_limbs(x) as usize + 1;
            let (dr, dc) = DIRECTIONS[d - 1];
            r = step_coordinate(r, dr, n);
            c = step_coordinate(c, dc, n);
            if let Some(t) = trace.as_deref_mut() {
                t.directions.push(d as u8);
                t.visited.push((r, c));
            }
        }
        let bit = self.matrices[i].get(r - 1, c - 1);
        if let Some(t) = trace {
            t.bit = bit;
        }
        bit
    }

    fn pack(&self, bits: impl Iterator<Item = bool>) -> BigUint {
        let n = self.n as usize;
        let mut limbs = vec![0u64; n.div_ceil(64)];
        for (i, b) in bits.enumerate() {
            if b {
                let k = n - 1 - i;
                limbs[k / 64] |= 1 << (k % 64);
            }
        }
        BigUint::from_slice(&digits_to_u32(&limbs))
    }

    pub fn evaluate(&self, x: &BigUint) -> Result<BigUint> {
        self.check_input(x)?;
        let limbs = x.to_u64_digits();
        Ok(self.pack((0..self.n as usize).map(|i| self.walk(i, &limbs, None))))
    }

    /// Word-sized evaluation for `n <= 64`.
    pub fn evaluate_u64(&self, x: u64) -> Result<u64> {
        let n = self.n;
        if n > 64 {
            return Err(Error::InvalidArgument(format!(
                "evaluate_u64 needs n <= 64, got {n}"
            )));
        }
        if n < 64 && x >> n != 0 {
            return Err(Error::out_of_range("x", format!("{x:#x} needs more than {n} bits")));
        }
        let limbs = [x];
        let mut y = 0u64;
        for i in 0..n as usize {
            y = (y << 1) | self.walk(i, &limbs, None) as u64;
        }
        Ok(y)
    }

    pub fn evaluate_traced(&self, x: &BigUint) -> Result<(BigUint, Vec<BitTrace>)> {
        self.check_input(x)?;
        let limbs = x.to_u64_digits();
        let traces: Vec<BitTrace> = (0..self.n as usize)
            .map(|i| {
                let mut t = BitTrace {
                    start: (0, 0),
                    directions: Vec::with_capacity(self.n as usize),
                    visited: Vec::with_capacity(self.n as usize),
                    bit: false,
                };
                self.walk(i, &limbs, Some(&mut t));
                t
            })
            .collect();
        let y = self.pack(traces.iter().map(|t| t.bit));
        Ok((y, traces))
    }

    /// Re-executes recorded paths against the matrices and returns the output
    /// they spell, rejecting traces whose steps are inconsistent.
    pub fn replay(&self, traces: &[BitTrace]) -> Result<BigUint> {
        let n = self.n;
        if traces.len() != n as usize {
            return Err(Error::Invariant(format!(
                "trace has {} entries, expected {n}",
                traces.len()
            )));
        }
        let in_range = |(r, c): (u32, u32)| (1..=n).contains(&r) && (1..=n).contains(&c);
        let mut bits = Vec::with_capacity(n as usize);
        for (i, t) in traces.iter().enumerate() {
            if t.directions.len() != n as usize || t.visited.len() != n as usize {
                return Err(Error::Invariant(format!("trace {} has wrong length", i + 1)));
            }
            if !in_range(t.start) {
                return Err(Error::Invariant(format!("trace {} starts off the grid", i + 1)));
            }
            let mut pos = t.start;
            for (&d, &cell) in t.directions.iter().zip(&t.visited) {
                if !(1..=8).contains(&d) {
                    return Err(Error::Invariant(format!("direction {d} not in 1..=8")));
                }
                let (dr, dc) = DIRECTIONS[d as usize - 1];
                pos = (step_coordinate(pos.0, dr, n), step_coordinate(pos.1, dc, n));
                if pos != cell {
                    return Err(Error::Invariant(format!(
                        "trace {} visits {cell:?} but the step lands on {pos:?}",
                        i + 1
                    )));
                }
            }
            let bit = self.matrices[i].get(pos.0 - 1, pos.1 - 1);
            if bit != t.bit {
                return Err(Error::Invariant(format!(
                    "trace {} records bit {} but the matrix holds {}",
                    i + 1,
                    t.bit as u8,
                    bit as u8
                )));
            }
            bits.push(bit);
        }
        Ok(self.pack(bits.into_iter()))
    }
}

/// `0x`-prefixed, zero-padded to `ceil(n/4)` digits, most significant first.
pub fn format_hex(v: &BigUint, n: u32) -> String {
    let width = n.div_ceil(4) as usize;
    format!("0x{:0>width$}", v.to_str_radix(16))
}

/// Parses decimal or `0x`-prefixed hexadecimal.
pub fn parse_value(s: &str) -> Result<BigUint> {
    let s = s.trim();
    let (digits, radix) = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => (hex, 16),
        None => (s, 10),
    };
    let cleaned: String = digits.chars().filter(|&c| c != '_').collect();
    if cleaned.is_empty() {
        return Err(Error::Parse(format!("empty number {s:?}")));
    }
    BigUint::parse_bytes(cleaned.as_bytes(), radix)
        .ok_or_else(|| Error::Parse(format!("malformed number {s:?}")))
}
