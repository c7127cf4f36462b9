//! Boolean circuits over {NOT, AND, OR, XOR, MUX} and the compiler that
//! turns a [`TauInstance`] into one.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::hash::HashParams;
use crate::limits::{guard, Limits};
use crate::tau::{TauInstance, DIRECTIONS};

/// Wire index. `0` and `1` are the constants, then the inputs, then one wire
/// per gate in order.
pub type Wire = u32;

pub const FALSE: Wire = 0;
pub const TRUE: Wire = 1;
const FIRST_INPUT: Wire = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    Not(Wire),
    And(Wire, Wire),
    Or(Wire, Wire),
    Xor(Wire, Wire),
    /// `sel ? hi : lo`
    Mux { sel: Wire, hi: Wire, lo: Wire },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::Not(_) => GateKind::Not,
            Gate::And(..) => GateKind::And,
            Gate::Or(..) => GateKind::Or,
            Gate::Xor(..) => GateKind::Xor,
            Gate::Mux { .. } => GateKind::Mux,
        }
    }

    pub fn operands(&self) -> Vec<Wire> {
        match *self {
            Gate::Not(a) => vec![a],
            Gate::And(a, b) | Gate::Or(a, b) | Gate::Xor(a, b) => vec![a, b],
            Gate::Mux { sel, hi, lo } => vec![sel, hi, lo],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GateKind {
    Not,
    And,
    Or,
    Xor,
    Mux,
}

impl GateKind {
    pub const ALL: [GateKind; 5] = [
        GateKind::Not,
        GateKind::And,
        GateKind::Or,
        GateKind::Xor,
        GateKind::Mux,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Not => "not",
            GateKind::And => "and",
            GateKind::Or => "or",
            GateKind::Xor => "xor",
            GateKind::Mux => "mux",
        }
    }
}

/// Where a compiled circuit came from; carried into DIMACS comments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub n: u32,
    pub seed: Option<u64>,
    pub prime_width: u32,
}

/// Topologically ordered circuit. Input wire `j` (0-based) carries bit
/// `x_{j+1}`, the `(j+1)`-th most significant bit of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    inputs: u32,
    gates: Vec<Gate>,
    outputs: Vec<Wire>,
    provenance: Option<Provenance>,
}

impl Circuit {
    /// Checks ordering and arity; `outputs` must name defined wires.
    pub fn new(inputs: u32, gates: Vec<Gate>, outputs: Vec<Wire>) -> Result<Self> {
        let c = Self {
            inputs,
            gates,
            outputs,
            provenance: None,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        let first_gate = FIRST_INPUT + self.inputs;
        for (k, g) in self.gates.iter().enumerate() {
            let own = first_gate + k as Wire;
            if let Some(bad) = g.operands().into_iter().find(|&w| w >= own) {
                return Err(Error::Invariant(format!(
                    "gate {k} reads wire {bad} before it is defined"
                )));
            }
        }
        let end = first_gate + self.gates.len() as Wire;
        if let Some(bad) = self.outputs.iter().find(|&&w| w >= end) {
            return Err(Error::Invariant(format!("output wire {bad} is undefined")));
        }
        Ok(())
    }

    pub fn inputs(&self) -> u32 {
        self.inputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn outputs(&self) -> &[Wire] {
        &self.outputs
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    pub fn input_wire(&self, j: u32) -> Wire {
        FIRST_INPUT + j
    }

    /// Gate index of `w`, if `w` is a gate output.
    pub fn gate_index(&self, w: Wire) -> Option<usize> {
        let first_gate = FIRST_INPUT + self.inputs;
        (w >= first_gate).then(|| (w - first_gate) as usize)
    }

    pub fn is_input(&self, w: Wire) -> bool {
        (FIRST_INPUT..FIRST_INPUT + self.inputs).contains(&w)
    }

    pub fn gate_counts(&self) -> [(GateKind, usize); 5] {
        GateKind::ALL.map(|k| (k, self.gates.iter().filter(|g| g.kind() == k).count()))
    }

    /// Evaluates on explicit input bits (`bits[j]` drives input `j`).
    pub fn eval_bits(&self, bits: &[bool]) -> Result<Vec<bool>> {
        if bits.len() != self.inputs as usize {
            return Err(Error::InvalidArgument(format!(
                "circuit has {} inputs, got {} bits",
                self.inputs,
                bits.len()
            )));
        }
        let mut v = Vec::with_capacity(FIRST_INPUT as usize + bits.len() + self.gates.len());
        v.extend([false, true]);
        v.extend_from_slice(bits);
        for g in &self.gates {
            let out = match *g {
                Gate::Not(a) => !v[a as usize],
                Gate::And(a, b) => v[a as usize] & v[b as usize],
                Gate::Or(a, b) => v[a as usize] | v[b as usize],
                Gate::Xor(a, b) => v[a as usize] ^ v[b as usize],
                Gate::Mux { sel, hi, lo } => {
                    if v[sel as usize] {
                        v[hi as usize]
                    } else {
                        v[lo as usize]
                    }
                }
            };
            v.push(out);
        }
        Ok(self.outputs.iter().map(|&w| v[w as usize]).collect())
    }

    /// Evaluates with `x` spread over the inputs most significant bit first;
    /// the outputs are packed the same way.
    pub fn eval(&self, x: &BigUint) -> Result<BigUint> {
        let n = self.inputs;
        if x.bits() > n as u64 {
            return Err(Error::out_of_range("x", format!("{x:#x} needs more than {n} bits")));
        }
        let bits: Vec<bool> = (0..n).map(|j| x.bit((n - 1 - j) as u64)).collect();
        let out = self.eval_bits(&bits)?;
        let mut y = BigUint::default();
        for (i, &b) in out.iter().enumerate() {
            if b {
                y.set_bit((out.len() - 1 - i) as u64, true);
            }
        }
        Ok(y)
    }

    pub fn eval_u64(&self, x: u64) -> Result<u64> {
        if self.outputs.len() > 64 {
            return Err(Error::InvalidArgument("more than 64 outputs".into()));
        }
        Ok(self.eval(&BigUint::from(x))?.to_u64().unwrap_or(0))
    }
}

/// Appends gates, folding constants and trivial identities on the way.
#[derive(Debug)]
pub struct CircuitBuilder {
    inputs: u32,
    gates: Vec<Gate>,
}

impl CircuitBuilder {
    pub fn new(inputs: u32) -> Self {
        Self {
            inputs,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, j: u32) -> Wire {
        assert!(j < self.inputs);
        FIRST_INPUT + j
    }

    /// Appends `g` verbatim.
    pub fn push(&mut self, g: Gate) -> Wire {
        self.gates.push(g);
        FIRST_INPUT + self.inputs + self.gates.len() as Wire - 1
    }

    pub fn constant(b: bool) -> Wire {
        if b {
            TRUE
        } else {
            FALSE
        }
    }

    pub fn not(&mut self, a: Wire) -> Wire {
        match a {
            FALSE => TRUE,
            TRUE => FALSE,
            _ => self.push(Gate::Not(a)),
        }
    }

    pub fn and(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (FALSE, _) | (_, FALSE) => FALSE,
            (TRUE, o) | (o, TRUE) => o,
            _ if a == b => a,
            _ => self.push(Gate::And(a, b)),
        }
    }

    pub fn or(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (TRUE, _) | (_, TRUE) => TRUE,
            (FALSE, o) | (o, FALSE) => o,
            _ if a == b => a,
            _ => self.push(Gate::Or(a, b)),
        }
    }

    pub fn xor(&mut self, a: Wire, b: Wire) -> Wire {
        match (a, b) {
            (FALSE, o) | (o, FALSE) => o,
            (TRUE, o) | (o, TRUE) => self.not(o),
            _ if a == b => FALSE,
            _ => self.push(Gate::Xor(a, b)),
        }
    }

    pub fn mux(&mut self, sel: Wire, hi: Wire, lo: Wire) -> Wire {
        match (sel, hi, lo) {
            (TRUE, _, _) => hi,
            (FALSE, _, _) => lo,
            _ if hi == lo => hi,
            (_, TRUE, FALSE) => sel,
            (_, FALSE, TRUE) => self.not(sel),
            _ => self.push(Gate::Mux { sel, hi, lo }),
        }
    }

    /// `leaves[k]` where `k` is spelled by `selectors` (least significant first).
    pub fn mux_tree(&mut self, selectors: &[Wire], leaves: &[Wire]) -> Wire {
        assert_eq!(leaves.len(), 1 << selectors.len());
        match selectors.split_last() {
            None => leaves[0],
            Some((&top, rest)) => {
                let half = leaves.len() / 2;
                let lo = self.mux_tree(rest, &leaves[..half]);
                let hi = self.mux_tree(rest, &leaves[half..]);
                self.mux(top, hi, lo)
            }
        }
    }

    fn constant_bits(value: u128, width: usize) -> Vec<Wire> {
        (0..width)
            .map(|k| Self::constant(k < 128 && value >> k & 1 == 1))
            .collect()
    }

    /// Ripple-carry sum of equal-width little-endian words; returns the sum
    /// and the carry out.
    pub fn add(&mut self, a: &[Wire], b: &[Wire]) -> (Vec<Wire>, Wire) {
        assert_eq!(a.len(), b.len());
        let mut carry = FALSE;
        let mut sum = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            let t = self.xor(x, y);
            sum.push(self.xor(t, carry));
            let both = self.and(x, y);
            let prop = self.and(carry, t);
            carry = self.or(both, prop);
        }
        (sum, carry)
    }

    pub fn finish(self, outputs: Vec<Wire>) -> Result<Circuit> {
        Circuit::new(self.inputs, self.gates, outputs)
    }
}

fn small_params(h: &HashParams) -> Result<(u128, u128, u128)> {
    match (h.a().to_u64(), h.b().to_u64(), h.p().to_u64()) {
        (Some(a), Some(b), Some(p)) => Ok((a as u128, b as u128, p as u128)),
        _ => Err(Error::InvalidArgument(format!("{h:?} too wide to compile"))),
    }
}

fn bit_len(v: u128) -> usize {
    (128 - v.leading_zeros()) as usize
}

/// Output bits (least significant first) of `((a*x + b) mod p) mod t` for a
/// power-of-two `t`.
///
/// The product is an input-gated chain of constant additions of
/// `(a * 2^k) mod p`, which keeps the accumulator below `(n + 1) * p`. The
/// residue then comes from compare-and-subtract stages against `p * 2^s`,
/// highest shift first, and `mod t` keeps the low `log2(t)` bits.
pub fn hash_bits(bld: &mut CircuitBuilder, h: &HashParams, x_lsb_first: &[Wire]) -> Result<Vec<Wire>> {
    let (a, b, p) = small_params(h)?;
    let t = h.t();
    if !t.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("modulus {t} is not a power of two")));
    }
    let n = x_lsb_first.len() as u128;
    let mut max_val = (n + 1) * (p - 1);
    let width = bit_len(max_val).max(1);

    let mut acc = CircuitBuilder::constant_bits(b, width);
    let mut term = a % p;
    for &xk in x_lsb_first {
        let gated: Vec<Wire> = (0..width)
            .map(|j| if term >> j & 1 == 1 { xk } else { FALSE })
            .collect();
        acc = bld.add(&acc, &gated).0;
        term = term * 2 % p;
    }

    let mut s = 0u32;
    while p << (s + 1) <= max_val {
        s += 1;
    }
    for shift in (0..=s).rev() {
        let c = p << shift;
        if c > max_val {
            continue;
        }
        let w = acc.len();
        // acc - c as acc + (2^w - c); the carry out is set iff acc >= c
        let neg = CircuitBuilder::constant_bits((1u128 << w) - c, w);
        let (diff, no_borrow) = bld.add(&acc, &neg);
        acc = acc
            .iter()
            .zip(&diff)
            .map(|(&keep, &sub)| bld.mux(no_borrow, sub, keep))
            .collect();
        max_val = (max_val - c).max(c - 1);
        acc.truncate(bit_len(max_val).max(1));
    }
    debug_assert!(max_val < p);

    let out_bits = t.trailing_zeros() as usize;
    Ok((0..out_bits)
        .map(|k| acc.get(k).copied().unwrap_or(FALSE))
        .collect())
}

/// Compiles `tau` into a circuit computing it bit for bit.
pub fn build_circuit(tau: &TauInstance, limits: &Limits) -> Result<Circuit> {
    let n = tau.n();
    guard("circuit prime width", tau.prime_width(), limits.circuit_prime_width)?;
    let mut bld = CircuitBuilder::new(n);
    // integer bit k of x lives on input n - 1 - k
    let x: Vec<Wire> = (0..n).map(|k| bld.input(n - 1 - k)).collect();
    let log_n = n.trailing_zeros() as usize;
    let modulus = n as i64;

    // Δ mod n for every direction, per coordinate, as constant bit leaves
    let delta_leaves = |pick: fn((i8, i8)) -> i8| -> Vec<Vec<Wire>> {
        (0..log_n)
            .map(|bit| {
                DIRECTIONS
                    .iter()
                    .map(|&d| {
                        let v = (pick(d) as i64).rem_euclid(modulus);
                        CircuitBuilder::constant(v >> bit & 1 == 1)
                    })
                    .collect()
            })
            .collect()
    };
    let dr_leaves = delta_leaves(|d| d.0);
    let dc_leaves = delta_leaves(|d| d.1);

    let mut outputs = Vec::with_capacity(n as usize);
    for i in 0..n as usize {
        let mut r = hash_bits(&mut bld, &tau.h_row()[i], &x)?;
        let mut c = hash_bits(&mut bld, &tau.h_col()[i], &x)?;
        for h in &tau.h_m()[i] {
            let d = hash_bits(&mut bld, h, &x)?;
            let dr: Vec<Wire> = dr_leaves.iter().map(|l| bld.mux_tree(&d, l)).collect();
            let dc: Vec<Wire> = dc_leaves.iter().map(|l| bld.mux_tree(&d, l)).collect();
            r = bld.add(&r, &dr).0;
            c = bld.add(&c, &dc).0;
        }
        let m = &tau.matrices()[i];
        let leaves: Vec<Wire> = (0..n * n)
            .map(|k| CircuitBuilder::constant(m.get(k / n, k % n)))
            .collect();
        let selectors: Vec<Wire> = c.iter().chain(&r).copied().collect();
        let mut y = bld.mux_tree(&selectors, &leaves);
        // each output gets a wire of its own
        if y < FIRST_INPUT + n || outputs.contains(&y) {
            y = bld.push(Gate::Or(y, y));
        }
        outputs.push(y);
    }
    let mut circuit = bld.finish(outputs)?;
    circuit.provenance = Some(Provenance {
        n,
        seed: tau.seed(),
        prime_width: tau.prime_width(),
    });
    Ok(circuit)
}

/// Word-level evaluation for `n <= 64`.
pub fn eval_circuit(circuit: &Circuit, x: u64) -> Result<u64> {
    circuit.eval_u64(x)
}
