//! Formula size as a function of `n`.

use rayon::prelude::*;

use crate::cnf::circuit::build_circuit;
use crate::cnf::tseitin::tseitin;
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::tau::TauInstance;

pub const EQUISATISFIABLE_NOTE: &str = "Tseitin CNF is equisatisfiable with the circuit, not \
equivalent to it: the auxiliary gate variables keep it polynomial. Exponential lower bounds on \
clause counts concern equivalent CNF over the input and output variables alone and are not \
measured here.";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRow {
    pub n: u32,
    pub gates: u64,
    pub variables: u64,
    pub clauses: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub seed: u64,
    pub rows: Vec<GrowthRow>,
    /// Least-squares slope of `log clauses` on `log n`; needs two rows.
    pub clause_exponent: Option<f64>,
    pub gate_exponent: Option<f64>,
    pub note: &'static str,
}

/// Slope of the least-squares line through `(ln x, ln y)`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = logs.iter().map(|&(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|&(x, _)| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Encodes `construct(n, seed)` for every `n` and tabulates the sizes.
pub fn clause_growth_report(seed: u64, n_values: &[u32], limits: &Limits) -> Result<GrowthReport> {
    let mut ns = n_values.to_vec();
    ns.sort_unstable();
    if ns.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument("n values must be distinct".into()));
    }
    let rows = ns
        .par_iter()
        .map(|&n| {
            let tau = TauInstance::construct(n, seed, None)?;
            let circuit = build_circuit(&tau, limits)?;
            let cnf = tseitin(&circuit);
            Ok(GrowthRow {
                n,
                gates: circuit.gates().len() as u64,
                variables: cnf.num_vars() as u64,
                clauses: cnf.clauses().len() as u64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = |f: fn(&GrowthRow) -> u64| {
        let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, f(r) as f64)).collect();
        log_log_slope(&pts)
    };
    Ok(GrowthReport {
        seed,
        clause_exponent: fit(|r| r.clauses),
        gate_exponent: fit(|r| r.gates),
        rows,
        note: EQUISATISFIABLE_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_of_exact_power_law() {
        let pts: Vec<(f64, f64)> = [2.0, 4.0, 8.0, 16.0].iter().map(|&n: &f64| (n, 3.0 * n.powi(3))).collect();
        assert!((log_log_slope(&pts).unwrap() - 3.0).abs() < 1e-9);
        assert_eq!(log_log_slope(&pts[..1]), None);
    }

    #[test]
    fn small_table() {
        let r = clause_growth_report(7, &[4, 2, 8], &Limits::default()).unwrap();
        let ns: Vec<u32> = r.rows.iter().map(|row| row.n).collect();
        assert_eq!(ns, vec![2, 4, 8]);
        assert!(r.rows.windows(2).all(|w| w[0].variables < w[1].variables));
        let tau = TauInstance::construct(4, 7, None).unwrap();
        let f = tseitin(&build_circuit(&tau, &Limits::default()).unwrap());
        assert_eq!(r.rows[1].variables, f.num_vars() as u64);
        assert_eq!(r.rows[1].clauses, f.clauses().len() as u64);
        assert!(r.clause_exponent.is_some());
        assert!(r.note.contains("equisatisfiable"));
    }

    #[test]
    fn duplicate_n_rejected() {
        assert!(clause_growth_report(1, &[2, 2], &Limits::default()).is_err());
    }
}
