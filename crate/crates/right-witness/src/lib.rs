//! Right-side derivation sequences: a verifier and constructors for the
//! transformation semigroups of ℕ.

pub mod branch;
pub mod error;
pub mod right;
pub mod sequence;

pub use branch::rank_candidates;
pub use error::{WResult, WitnessError};
pub use right::{
    alternate_nth, bridge_bl, not_surj_pivot, witness_right_bl, witness_right_bl1, witness_right_f, witness_right_h,
    witness_right_i_zero, witness_right_ideal_descent, witness_right_inj, witness_right_t, witness_right_t_not_surj,
    Bridge, CertMap, Opts,
};
pub use sequence::{ensure_verified, verify_sequence, DerivationSequence, Gen, Side, Step};
