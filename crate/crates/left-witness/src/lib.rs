//! Left-side derivation sequences over the tilde maps, and the class
//! interleaving behind the DBL constructions.

pub mod contain;
pub mod family;
pub mod left;

pub use contain::{contain_dbl_construct, Containment, FactorizationReport};
pub use family::{
    class_align_expr, dbl_interleave, decode_stage, interleave, register_generators, stage_bound, ClassFamily,
    Interleave, StageTuple,
};
pub use left::{
    dbl_capability, witness_left_dbl, witness_left_dbl1, witness_left_i_zero, witness_left_surj, witness_left_t,
    witness_left_t_not_inj, LeftMap,
};
