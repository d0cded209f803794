//! Ground truth on finite semigroups: closure from generators, one-sided
//! congruences generated by pairs, their distances and least diameters.

pub mod cong;
pub mod error;
pub mod fixtures;
pub mod search;
pub mod semigroup;

pub use cong::{
    check_sequence, cong_closure, cross_check, diameter, diameter_of, distances, is_metric, is_universal,
    left_cong_closure, naive_distances, one_step_graph, right_cong_closure, sequence, CrossCheckReport, Diameter, Side,
    Step,
};
pub use error::{OResult, OracleError};
pub use fixtures::{ideal_fixtures, random_pairs, random_semigroup, IdealFixture};
pub use search::{
    exact_diameter, ideal_check, search_min_diameter, square, zero_checks, IdealCheck, SearchResult, ZeroCheck,
    EXHAUSTIVE_GUARD, SUBSET_GUARD,
};
pub use semigroup::{
    cyclic, generate, left_zero, right_zero, s3, t2, Element, FiniteSemigroup, GenSpec, Transformation, ASSOC_CHECK,
};
