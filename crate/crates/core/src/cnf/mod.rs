//! Circuit compilation, Tseitin CNF and DIMACS output.

pub mod circuit;
pub mod dimacs;
pub mod growth;
pub mod tseitin;

pub use circuit::{build_circuit, eval_circuit, Circuit, CircuitBuilder, Gate, GateKind, Provenance, Wire};
pub use dimacs::{emit_dimacs, parse_solver_output, run_solver, witness_from_model, SolverOutcome, SOLVER_ENV};
pub use growth::{clause_growth_report, log_log_slope, GrowthReport, GrowthRow, EQUISATISFIABLE_NOTE};
pub use tseitin::{tseitin, Clause, CnfFormula, Lit};
