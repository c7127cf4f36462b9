//! Size guards for the exhaustive operations.

use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable that raises every `n` guard at once.
pub const MAX_N_ENV: &str = "TAULAB_MAX_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Limits {
    pub brute_force_n: u32,
    pub census_n: u32,
    pub irreducible_n: u32,
    pub h_inv_n: u32,
    pub circuit_prime_width: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            brute_force_n: 24,
            census_n: 20,
            irreducible_n: 16,
            h_inv_n: 24,
            circuit_prime_width: 32,
        }
    }
}

impl Limits {
    /// No guard at all; callers take responsibility for the run time.
    pub fn unbounded() -> Self {
        Self {
            brute_force_n: u32::MAX,
            census_n: u32::MAX,
            irreducible_n: u32::MAX,
            h_inv_n: u32::MAX,
            circuit_prime_width: u32::MAX,
        }
    }

    /// Raises every `n` guard to at least `max_n`.
    pub fn raised_to(self, max_n: u32) -> Self {
        Self {
            brute_force_n: self.brute_force_n.max(max_n),
            census_n: self.census_n.max(max_n),
            irreducible_n: self.irreducible_n.max(max_n),
            h_inv_n: self.h_inv_n.max(max_n),
            circuit_prime_width: self.circuit_prime_width,
        }
    }

    /// Defaults, raised by `TAULAB_MAX_N` when it is set to a number.
    pub fn from_env() -> Result<Self> {
        match std::env::var(MAX_N_ENV) {
            Ok(v) => v
                .trim()
                .parse::<u32>()
                .map(|m| Self::default().raised_to(m))
                .map_err(|_| Error::InvalidArgument(format!("{MAX_N_ENV}={v:?} is not a number"))),
            Err(_) => Ok(Self::default()),
        }
    }
}

pub(crate) fn guard(what: &'static str, n: u32, limit: u32) -> Result<()> {
    if n > limit {
        return Err(Error::Guard { what, n, limit });
    }
    Ok(())
}
