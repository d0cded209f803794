//! Total maps ℕ → ℕ as closed symbolic terms.
//!
//! Maps compose left to right throughout: the product `αβ` is "first α, then
//! β", matching `x(αβ) = (xα)β`. Equalities between maps are checked exactly
//! on finite windows `[0, N)`; cardinality facts such as "the image has
//! infinite complement" are supplied by the caller in a [`Capability`] and
//! only spot-checked, so every conclusion drawn from them is relative to the
//! honesty of those claims.

pub mod canonical;
pub mod capability;
pub mod error;
pub mod expr;
pub mod fiber;
pub mod pairing;
pub mod registry;
pub mod set;
pub mod window;

pub use canonical::*;
pub use capability::{check_capabilities, Capability, ComplementEnum, FiberClaim};
pub use error::{NatError, Result};
pub use expr::{evaluate, MapExpr, MapFn};
pub use fiber::{FiberForm, Fibers, LinearBound};
pub use pairing::{pack, try_pack, unpack};
pub use set::{Cardinality, Enumerator, SetExpr, SetFn, DEFAULT_SCAN_CAP};
pub use window::{verify_equal_on_window, Failure, Status, WindowReport};
