//! Irreducible input/output codes.
//!
//! The code of a pair `(x, y)` is `x` and `y` each padded to `n` bits and
//! concatenated. A code is irreducible when no other code in the function's
//! graph sits at Hamming distance one from it.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::limits::{guard, Limits};
use crate::tau::TauInstance;

#[derive(Clone, Debug, PartialEq)]
pub struct IrreducibleReport {
    pub n: u32,
    pub size: u64,
    pub k: u32,
    /// `2^n / k`.
    pub bound: f64,
    /// `size > 2^n / k`.
    pub bound_holds: bool,
    /// Irreducible codes, when requested.
    pub members: Option<BTreeSet<u64>>,
}

/// Hamming weight of a string of `0`/`1` characters.
pub fn ones_count(s: &str) -> Result<u32> {
    s.chars().try_fold(0u32, |acc, ch| match ch {
        '0' => Ok(acc),
        '1' => Ok(acc + 1),
        other => Err(Error::Parse(format!("{other:?} is not a bit"))),
    })
}

/// `x` and `y` concatenated as a `2n`-bit code, `x` in the high half.
pub fn pair_code(x: u64, y: u64, n: u32) -> u64 {
    (x << n) | y
}

/// The graph of `tau` as a list of codes, indexed by `x`.
pub fn relation_codes(tau: &TauInstance) -> Result<Vec<u64>> {
    let n = tau.n();
    if n > 32 {
        return Err(Error::InvalidArgument(format!(
            "codes of 2n = {} bits do not fit a word",
            2 * n
        )));
    }
    (0..1u64 << n)
        .map(|x| Ok(pair_code(x, tau.evaluate_u64(x)?, n)))
        .collect()
}

fn check_k(k: u32, n: u32) -> Result<()> {
    if k.is_multiple_of(2) || k <= 2 || k >= n {
        return Err(Error::out_of_range(
            "k",
            format!("{k} (need odd k with 2 < k < n = {n})"),
        ));
    }
    Ok(())
}

/// Counts irreducible codes by probing all `2n` single-bit flips of each code
/// against a hash set of the whole relation.
pub fn irreducible_census(
    tau: &TauInstance,
    k: u32,
    limits: &Limits,
    list_members: bool,
) -> Result<IrreducibleReport> {
    let n = tau.n();
    guard("irreducible census", n, limits.irreducible_n)?;
    check_k(k, n)?;
    let codes = relation_codes(tau)?;
    let graph: HashSet<u64> = codes.iter().copied().collect();
    let irreducible = codes
        .iter()
        .copied()
        .filter(|&code| (0..2 * n).all(|b| !graph.contains(&(code ^ (1u64 << b)))));

    let (size, members) = if list_members {
        let set: BTreeSet<u64> = irreducible.collect();
        (set.len() as u64, Some(set))
    } else {
        (irreducible.count() as u64, None)
    };
    let domain = 1u64 << n;
    Ok(IrreducibleReport {
        n,
        size,
        k,
        bound: domain as f64 / k as f64,
        bound_holds: size as u128 * k as u128 > domain as u128,
        members,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_count_examples() {
        assert_eq!(ones_count("1011").unwrap(), 3);
        assert_eq!(ones_count("").unwrap(), 0);
        assert_eq!(ones_count("11111111").unwrap(), 8);
        assert!(ones_count("10a1").is_err());
    }

    #[test]
    fn k_range() {
        let tau = TauInstance::construct(4, 1, None).unwrap();
        let lim = Limits::default();
        assert!(irreducible_census(&tau, 3, &lim, false).is_ok());
        for bad in [1, 2, 4, 5] {
            assert!(irreducible_census(&tau, bad, &lim, false).is_err(), "k = {bad}");
        }
        let tau2 = TauInstance::construct(2, 1, None).unwrap();
        assert!(irreducible_census(&tau2, 3, &lim, false).is_err());
    }

    #[test]
    fn bound_flag_matches_definition() {
        for seed in 0..6 {
            let tau = TauInstance::construct(8, seed, None).unwrap();
            for k in [3, 5, 7] {
                let r = irreducible_census(&tau, k, &Limits::default(), true).unwrap();
                assert_eq!(r.bound_holds, r.size as f64 > 256.0 / k as f64);
                assert_eq!(r.members.as_ref().unwrap().len() as u64, r.size);
                assert!(r.size <= 256);
            }
        }
    }

    #[test]
    fn one_bit_neighbours_with_same_output_are_reducible() {
        let tau = TauInstance::construct(8, 3, None).unwrap();
        let r = irreducible_census(&tau, 3, &Limits::default(), true).unwrap();
        let members = r.members.unwrap();
        for x in 0..256u64 {
            let y = tau.evaluate_u64(x).unwrap();
            let has_twin = (0..8).any(|b| tau.evaluate_u64(x ^ (1 << b)).unwrap() == y);
            assert_eq!(members.contains(&pair_code(x, y, 8)), !has_twin, "x = {x}");
        }
    }

    #[test]
    fn guard_applies() {
        let tau = TauInstance::construct(32, 1, Some(32)).unwrap();
        assert!(matches!(
            irreducible_census(&tau, 3, &Limits::default(), false),
            Err(Error::Guard { .. })
        ));
    }
}
