//! Tau one-way-function candidates and the tooling to probe them.
//!
//! * [`rng`], [`prime`] — seeded SplitMix64 draws and prime sampling
//! * [`hash`] — Carter–Wegman hashes with per-collection constraints
//! * [`tau`], [`format`] — instance construction, evaluation and the
//!   `taulab-1` file format
//! * [`lab`] — exhaustive and randomized inversion, censuses, estimators
//! * [`cnf`] — circuit compilation, Tseitin CNF and DIMACS output

pub mod cli;
pub mod cnf;
pub mod error;
pub mod format;
pub mod hash;
pub mod lab;
pub mod limits;
pub mod prime;
pub mod rng;
pub mod tau;

#[cfg(test)]
mod test_support;

pub use error::{Error, Result};
pub use hash::HashParams;
pub use limits::Limits;
pub use rng::RandomState;
pub use tau::{BitTrace, TauInstance};
