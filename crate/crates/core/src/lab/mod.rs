//! Inversion experiments: exhaustive and randomized preimage search,
//! censuses, per-bit event estimators and irreducibility counts.
//!
//! The exhaustive operations here stand in for any constant-time preimage
//! oracle: preimages are enumerated explicitly.

pub mod attack;
pub mod irreducible;
pub mod preimage;

pub use attack::{randomized_invert, AttackConfig, AttackOutcome, AttackerReport};
pub use irreducible::{irreducible_census, ones_count, IrreducibleReport};
pub use preimage::{
    bit_event_probability, brute_force_preimage, claimed_bit_probability,
    conditional_bit_probability, conditional_on_others, h_inv, h_inv_sizes, preimage_census,
    uniform_preimage_size, with_workers, PreimageReport, NULL_MODEL_BIT_PROBABILITY,
};
