//! Partition monoids: exact arithmetic on `P_n` and block oracles for
//! partitions of `ℕ ∪ ℕ′`, with the construction showing that one pair
//! `(α, β)` generates the diagonal right act.

pub mod error;
pub mod finite;
pub mod render;
pub mod symbolic;

pub use error::{PResult, PartitionError};
pub use finite::{random_partition, random_pb, FinitePartition};
pub use render::{parse_ascii, render_ascii, MAX_RENDER};
pub use symbolic::{
    five_split, random_tiled, verify_diagonal_witness, verify_left_transfer, verify_product, DiagonalReport, Mismatch,
    ProductReport, SymbolicPartition, Vtx,
};
