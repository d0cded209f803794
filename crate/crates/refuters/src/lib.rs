//! Bounded-depth refutations with self-contained certificates.
//!
//! Each refuter takes a candidate finite generating set `U` (as certified
//! maps) and builds elements that no `U`-sequence of the given length can
//! join. The certificate lists finite claims; [`replay`] re-derives and
//! re-evaluates them from the serialized form alone.

pub mod cert;
pub mod claim;
pub mod cong;
pub mod depth;
pub mod error;
pub mod fixtures;
pub mod ideal;
pub mod perm;
pub mod rel;

pub use cert::{
    check_conflict, obligations, replay, replay_json, seal, soundness_gate, Proof, RefutationCertificate, ReplayReport,
    Target,
};
pub use claim::{evaluate, Basis, Checked, Claim, Outcome, COLARGE_MIN};
pub use cong::{refute_left_cong_depth, refute_right_cong_depth};
pub use depth::{
    colarge_step, refute_left_depth2_surj, refute_left_depth3_surj, refute_right_depth2_bl, refute_right_depth3_inj,
};
pub use error::{RResult, RefuteError};
pub use ideal::{refute_left_ideal_fg, refute_right_ideal_fg};
pub use perm::{collapse, finite_perm, skip};
pub use rel::{sigma_count, sigma_enum, sigma_prime_enum, Entry, Env, RelTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RefuteOpts {
    /// Window for claims that can only be probed.
    pub window: u64,
    /// Base of the block that fresh points are drawn from.
    pub block: u64,
    /// Search steps allowed per choice.
    pub budget: u64,
}

impl Default for RefuteOpts {
    fn default() -> Self {
        RefuteOpts { window: 256, block: 1 << 20, budget: 1 << 12 }
    }
}

/// Run the refuter for `target`. `depth` only matters for the congruence
/// targets; the others have a fixed depth and reject any other value.
pub fn refute(target: Target, gens: &[Entry], depth: u64, opts: &RefuteOpts) -> RResult<RefutationCertificate> {
    if let Some(d) = target.fixed_depth() {
        if depth != d {
            return Err(RefuteError::Precondition(format!("{target} refutes at depth {d} only")));
        }
    }
    match target {
        Target::RightIdeal => refute_right_ideal_fg(gens, opts),
        Target::LeftIdeal => refute_left_ideal_fg(gens, opts),
        Target::RightCong => refute_right_cong_depth(gens, depth, opts),
        Target::LeftCong => refute_left_cong_depth(gens, depth, opts),
        Target::RightBl2 => refute_right_depth2_bl(gens, opts),
        Target::RightInj3 => refute_right_depth3_inj(gens, opts),
        Target::LeftSurj2 => refute_left_depth2_surj(gens, opts),
        Target::LeftSurj3 => refute_left_depth3_surj(gens, opts),
    }
}
