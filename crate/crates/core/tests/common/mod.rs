#![allow(dead_code)]

use std::collections::HashSet;

use taulab::cnf::CnfFormula;
use taulab::hash::HashParams;
use taulab::tau::BitMatrix;
use taulab::TauInstance;

fn h(a: u64, b: u64, p: u64, t: u64) -> HashParams {
    HashParams::from_u64(a, b, p, t).unwrap()
}

/// The worked n = 2 instance. Outputs for x = 0..4 are 1, 3, 1, 2.
pub fn hand_instance() -> TauInstance {
    let m1 = BitMatrix::from_bits(&[vec![1, 0], vec![0, 1]]).unwrap();
    let m2 = BitMatrix::from_bits(&[vec![0, 0], vec![1, 1]]).unwrap();
    TauInstance::from_parts(
        2,
        5,
        None,
        vec![m1, m2],
        vec![h(3, 2, 5, 2), h(4, 3, 7, 2)],
        vec![h(2, 1, 7, 2), h(5, 2, 11, 2)],
        vec![
            vec![h(3, 1, 11, 8), h(5, 3, 13, 8)],
            vec![h(2, 5, 17, 8), h(7, 4, 19, 8)],
        ],
    )
    .unwrap()
}

/// Unit propagation from `assumptions`. `None` on conflict, otherwise the
/// partial assignment indexed by variable (slot 0 unused).
pub fn unit_propagate(cnf: &CnfFormula, assumptions: &[i32]) -> Option<Vec<Option<bool>>> {
    let nv = cnf.num_vars() as usize;
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); 2 * (nv + 1)];
    let slot = |l: i32| 2 * l.unsigned_abs() as usize + (l < 0) as usize;
    for (k, c) in cnf.clauses().iter().enumerate() {
        for &l in c {
            occurs[slot(l)].push(k);
        }
    }
    let mut value: Vec<Option<bool>> = vec![None; nv + 1];
    let mut queue: Vec<i32> = Vec::new();
    let assign = |l: i32, value: &mut Vec<Option<bool>>, queue: &mut Vec<i32>| -> bool {
        let v = l.unsigned_abs() as usize;
        match value[v] {
            Some(b) => b == (l > 0),
            None => {
                value[v] = Some(l > 0);
                queue.push(l);
                true
            }
        }
    };
    let lit_value = |l: i32, value: &Vec<Option<bool>>| value[l.unsigned_abs() as usize].map(|b| b == (l > 0));

    for c in cnf.clauses().iter().filter(|c| c.len() == 1) {
        if !assign(c[0], &mut value, &mut queue) {
            return None;
        }
    }
    for &l in assumptions {
        if !assign(l, &mut value, &mut queue) {
            return None;
        }
    }
    while let Some(l) = queue.pop() {
        // clauses where l is now false
        for &k in &occurs[slot(-l)] {
            let clause = &cnf.clauses()[k];
            if clause.iter().any(|&m| lit_value(m, &value) == Some(true)) {
                continue;
            }
            let open: Vec<i32> = clause
                .iter()
                .copied()
                .filter(|&m| lit_value(m, &value).is_none())
                .collect();
            match open.as_slice() {
                [] => return None,
                [only] if !assign(*only, &mut value, &mut queue) => return None,
                _ => {}
            }
        }
    }
    Some(value)
}

/// Assumptions pinning the input variables to `x` (most significant first).
pub fn input_assumptions(cnf: &CnfFormula, x: u64) -> Vec<i32> {
    let n = cnf.inputs().len();
    cnf.inputs()
        .iter()
        .enumerate()
        .map(|(j, &v)| if x >> (n - 1 - j) & 1 == 1 { v as i32 } else { -(v as i32) })
        .collect()
}

/// Irreducible codes by comparing every pair of graph codes, O(4^n).
pub fn all_pairs_irreducible(tau: &TauInstance) -> HashSet<u64> {
    let n = tau.n();
    let codes: Vec<u64> = (0..1u64 << n)
        .map(|x| (x << n) | tau.evaluate_u64(x).unwrap())
        .collect();
    codes
        .iter()
        .copied()
        .filter(|&a| !codes.iter().any(|&b| (a ^ b).count_ones() == 1))
        .collect()
}

/// Least-squares slope through `(ln x, ln y)`, computed independently of the
/// library's fit.
pub fn slope(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let (sx, sy, sxx, sxy) = points.iter().fold((0.0, 0.0, 0.0, 0.0), |acc, &(x, y)| {
        let (lx, ly) = (x.ln(), y.ln());
        (acc.0 + lx, acc.1 + ly, acc.2 + lx * lx, acc.3 + lx * ly)
    });
    (k * sxy - sx * sy) / (k * sxx - sx * sx)
}
