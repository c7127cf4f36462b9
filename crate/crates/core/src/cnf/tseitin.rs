//! Tseitin encoding of a [`Circuit`].

use crate::cnf::circuit::{Circuit, Gate, GateKind, Provenance, Wire, FALSE, TRUE};
use crate::error::{Error, Result};

pub type Lit = i32;
pub type Clause = Vec<Lit>;

/// Equisatisfiable CNF of a circuit.
///
/// Variables `1..=inputs` are the inputs in circuit order (`x_1` first), then
/// one per gate. When a gate reads a constant wire, one extra variable pinned
/// true by a unit clause stands in for both constants.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: u32,
    clauses: Vec<Clause>,
    inputs: Vec<u32>,
    outputs: Vec<u32>,
    constant_var: Option<u32>,
    gate_counts: [(GateKind, usize); 5],
    provenance: Option<Provenance>,
}

impl CnfFormula {
    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// `inputs()[j]` is the variable of `x_{j+1}`.
    pub fn inputs(&self) -> &[u32] {
        &self.inputs
    }

    /// `outputs()[i]` is the variable of `y_{i+1}`.
    pub fn outputs(&self) -> &[u32] {
        &self.outputs
    }

    pub fn constant_var(&self) -> Option<u32> {
        self.constant_var
    }

    pub fn gate_counts(&self) -> &[(GateKind, usize); 5] {
        &self.gate_counts
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Checks literal ranges and that the variable maps are injective.
    pub fn validate(&self) -> Result<()> {
        for (k, c) in self.clauses.iter().enumerate() {
            if let Some(&bad) = c
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() > self.num_vars)
            {
                return Err(Error::Invariant(format!("clause {k} has literal {bad}")));
            }
        }
        for (name, map) in [("input", &self.inputs), ("output", &self.outputs)] {
            let mut seen = map.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != map.len() {
                return Err(Error::Invariant(format!("{name} map is not injective")));
            }
        }
        Ok(())
    }
}

fn push_clause(out: &mut Vec<Clause>, lits: &[Lit]) {
    let mut c: Clause = Vec::with_capacity(lits.len());
    for &l in lits {
        if !c.contains(&l) {
            c.push(l);
        }
    }
    out.push(c);
}

pub fn tseitin(circuit: &Circuit) -> CnfFormula {
    let inputs = circuit.inputs();
    let gates = circuit.gates();
    let uses_constants = gates
        .iter()
        .flat_map(Gate::operands)
        .any(|w| w == FALSE || w == TRUE);
    let base = inputs + gates.len() as u32;
    let constant_var = uses_constants.then_some(base + 1);

    // wires 2.. map one-to-one onto variables 1..
    let lit = |w: Wire| -> Lit {
        match w {
            FALSE => -(constant_var.expect("constant in use") as Lit),
            TRUE => constant_var.expect("constant in use") as Lit,
            _ => (w - 1) as Lit,
        }
    };

    let mut clauses = Vec::with_capacity(gates.len() * 4 + 1);
    for (k, g) in gates.iter().enumerate() {
        let o = (inputs + k as u32 + 1) as Lit;
        match *g {
            Gate::Not(a) => {
                let a = lit(a);
                push_clause(&mut clauses, &[a, o]);
                push_clause(&mut clauses, &[-a, -o]);
            }
            Gate::And(a, b) => {
                let (a, b) = (lit(a), lit(b));
                push_clause(&mut clauses, &[-o, a]);
                push_clause(&mut clauses, &[-o, b]);
                push_clause(&mut clauses, &[o, -a, -b]);
            }
            Gate::Or(a, b) => {
                let (a, b) = (lit(a), lit(b));
                push_clause(&mut clauses, &[o, -a]);
                push_clause(&mut clauses, &[o, -b]);
                push_clause(&mut clauses, &[-o, a, b]);
            }
            Gate::Xor(a, b) => {
                let (a, b) = (lit(a), lit(b));
                push_clause(&mut clauses, &[-o, a, b]);
                push_clause(&mut clauses, &[-o, -a, -b]);
                push_clause(&mut clauses, &[o, -a, b]);
                push_clause(&mut clauses, &[o, a, -b]);
            }
            Gate::Mux { sel, hi, lo } => {
                let (s, a, b) = (lit(sel), lit(hi), lit(lo));
                push_clause(&mut clauses, &[-s, -a, o]);
                push_clause(&mut clauses, &[-s, a, -o]);
                push_clause(&mut clauses, &[s, -b, o]);
                push_clause(&mut clauses, &[s, b, -o]);
            }
        }
    }
    if let Some(v) = constant_var {
        clauses.push(vec![v as Lit]);
    }

    let outputs = circuit
        .outputs()
        .iter()
        .map(|&w| lit(w).unsigned_abs())
        .collect();
    CnfFormula {
        num_vars: constant_var.unwrap_or(base),
        clauses,
        inputs: (1..=inputs).collect(),
        outputs,
        constant_var,
        gate_counts: circuit.gate_counts(),
        provenance: circuit.provenance().cloned(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::circuit::{build_circuit, Circuit};
    use crate::limits::Limits;
    use crate::test_support::hand_instance;

    #[test]
    fn single_and_gate() {
        let c = Circuit::new(2, vec![Gate::And(2, 3)], vec![4]).unwrap();
        let f = tseitin(&c);
        assert_eq!(f.clauses().len(), 3);
        assert_eq!(f.num_vars(), 3);
        assert_eq!(f.inputs(), &[1, 2]);
        assert_eq!(f.outputs(), &[3]);
        assert_eq!(f.constant_var(), None);
    }

    #[test]
    fn clause_counts_per_kind() {
        for (g, want) in [
            (Gate::Not(2), 2),
            (Gate::Or(2, 3), 3),
            (Gate::Xor(2, 3), 4),
            (Gate::Mux { sel: 2, hi: 3, lo: 4 }, 4),
        ] {
            let c = Circuit::new(3, vec![g], vec![5]).unwrap();
            assert_eq!(tseitin(&c).clauses().len(), want, "{g:?}");
        }
    }

    #[test]
    fn satisfying_assignments_follow_the_circuit() {
        let c = Circuit::new(
            3,
            vec![Gate::Xor(2, 3), Gate::Mux { sel: 4, hi: 5, lo: 2 }, Gate::And(6, TRUE)],
            vec![7],
        )
        .unwrap();
        let f = tseitin(&c);
        f.validate().unwrap();
        let nv = f.num_vars();
        let sat = |a: u32| {
            f.clauses().iter().all(|cl| {
                cl.iter()
                    .any(|&l| (a >> (l.unsigned_abs() - 1) & 1 == 1) == (l > 0))
            })
        };
        let mut models = 0;
        for a in 0..1u32 << nv {
            if sat(a) {
                models += 1;
                let bits: Vec<bool> = (0..3).map(|j| a >> j & 1 == 1).collect();
                let want = c.eval_bits(&bits).unwrap()[0];
                assert_eq!(a >> (f.outputs()[0] - 1) & 1 == 1, want);
            }
        }
        assert_eq!(models, 8);
    }

    #[test]
    fn variables_are_inputs_plus_gates() {
        let tau = hand_instance();
        let c = build_circuit(&tau, &Limits::default()).unwrap();
        let f = tseitin(&c);
        f.validate().unwrap();
        let extra = f.constant_var().is_some() as u32;
        assert_eq!(f.num_vars(), 2 + c.gates().len() as u32 + extra);
    }
}
