//! DIMACS output and the external solver hand-off.

use std::fmt::Write as _;
use std::path::Path;
use std::process::Command;

use num_bigint::BigUint;

use crate::cnf::tseitin::CnfFormula;
use crate::error::{Error, Result};

/// Environment variable naming a DIMACS solver executable.
pub const SOLVER_ENV: &str = "TAULAB_SAT_SOLVER";

/// Renders `cnf`; with `fixed_output` one unit clause per output bit pins
/// the outputs to `y`, so any model carries a preimage on the inputs.
pub fn emit_dimacs(cnf: &CnfFormula, fixed_output: Option<&BigUint>) -> Result<String> {
    let n = cnf.outputs().len();
    let units: Vec<i32> = match fixed_output {
        None => Vec::new(),
        Some(y) => {
            if y.bits() > n as u64 {
                return Err(Error::out_of_range("y", format!("{y:#x} needs more than {n} bits")));
            }
            cnf.outputs()
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    let v = v as i32;
                    if y.bit((n - 1 - i) as u64) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        }
    };

    let mut out = String::new();
    out.push_str("c taulab tau circuit, Tseitin encoding\n");
    match cnf.provenance() {
        Some(p) => {
            let seed = p.seed.map_or("none".to_string(), |s| s.to_string());
            let _ = writeln!(out, "c n = {}", p.n);
            let _ = writeln!(out, "c seed = {seed}");
            let _ = writeln!(out, "c prime_width = {}", p.prime_width);
        }
        None => {
            let _ = writeln!(out, "c n = {n}");
        }
    }
    let gates: Vec<String> = cnf
        .gate_counts()
        .iter()
        .map(|(k, c)| format!("{}={c}", k.name()))
        .collect();
    let _ = writeln!(out, "c gates: {}", gates.join(" "));
    let constant = cnf.constant_var().is_some() as usize;
    let _ = writeln!(
        out,
        "c clauses: gate={} constant={} fixed_output={}",
        cnf.clauses().len() - constant,
        constant,
        units.len()
    );
    let join = |vars: &[u32]| {
        vars.iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    let _ = writeln!(out, "c inputs x_1..x_n (x_1 most significant): {}", join(cnf.inputs()));
    let _ = writeln!(out, "c outputs y_1..y_n (y_1 most significant): {}", join(cnf.outputs()));
    if let Some(y) = fixed_output {
        let _ = writeln!(out, "c fixed output y = {y:#x}");
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len() + units.len());
    for clause in cnf.clauses() {
        for l in clause {
            let _ = write!(out, "{l} ");
        }
        out.push_str("0\n");
    }
    for u in units {
        let _ = writeln!(out, "{u} 0");
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolverOutcome {
    /// Literals of the model, as printed on `v` lines.
    Satisfiable(Vec<i32>),
    Unsatisfiable,
    Unknown,
}

/// Parses solver output: the first `s ` line gives the status, `v ` lines
/// the model.
pub fn parse_solver_output(text: &str) -> Result<SolverOutcome> {
    let status = text
        .lines()
        .find_map(|l| l.strip_prefix("s "))
        .map(str::trim)
        .ok_or_else(|| Error::Parse("solver output has no status line".into()))?;
    match status {
        "SATISFIABLE" => {
            let mut model = Vec::new();
            for line in text.lines().filter_map(|l| l.strip_prefix("v ")) {
                for tok in line.split_whitespace() {
                    let l: i32 = tok
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad literal {tok:?} in model")))?;
                    if l != 0 {
                        model.push(l);
                    }
                }
            }
            Ok(SolverOutcome::Satisfiable(model))
        }
        "UNSATISFIABLE" => Ok(SolverOutcome::Unsatisfiable),
        _ => Ok(SolverOutcome::Unknown),
    }
}

/// Runs `solver` with the DIMACS file as its only argument.
pub fn run_solver(solver: &Path, dimacs: &Path) -> Result<SolverOutcome> {
    // SAT solvers conventionally exit with 10/20, so the status is not checked
    let out = Command::new(solver)
        .arg(dimacs)
        .output()
        .map_err(|e| Error::InvalidArgument(format!("cannot run {}: {e}", solver.display())))?;
    parse_solver_output(&String::from_utf8_lossy(&out.stdout))
}

/// Reads `x` off the input variables of a model.
pub fn witness_from_model(cnf: &CnfFormula, model: &[i32]) -> BigUint {
    let n = cnf.inputs().len();
    let mut x = BigUint::default();
    for (j, &v) in cnf.inputs().iter().enumerate() {
        if model.contains(&(v as i32)) {
            x.set_bit((n - 1 - j) as u64, true);
        }
    }
    x
}
