//! Classes of self-maps of ℕ: membership tests with finite witnesses and
//! seeded samplers whose capabilities are exact by construction.

pub mod member;
pub mod partial;
pub mod random;
pub mod tag;

pub use member::{k_class_probe, member_check, ClassError, KProbe, Verdict, Witness};
pub use partial::{then_fn, ElemFn, Element, PartialMapExpr};
pub use random::{chain, find_collision, random_element, random_term, Atom, AtomKind};
pub use tag::ClassTag;
