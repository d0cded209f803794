//! Partial maps and the element type shared by every class.

use std::sync::Arc;

use natmap_core::{Cardinality, MapExpr, Result, SetExpr};
use serde::{Deserialize, Serialize};

/// A partial map: `body` restricted to the decidable set `domain`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartialMapExpr {
    pub domain: SetExpr,
    pub body: MapExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain_complement: Option<Cardinality>,
}

impl PartialMapExpr {
    pub fn total(body: MapExpr) -> Self {
        PartialMapExpr { domain: SetExpr::All, body, domain_complement: Some(Cardinality::Finite { elems: vec![] }) }
    }

    /// The zero of the symmetric inverse monoid.
    pub fn empty() -> Self {
        PartialMapExpr { domain: SetExpr::Empty, body: MapExpr::Id, domain_complement: Some(Cardinality::Infinite) }
    }
}

/// A compiled element: `None` means undefined at that point.
pub type ElemFn = Arc<dyn Fn(u64) -> Result<Option<u64>> + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Element {
    Total { map: MapExpr },
    Partial { map: PartialMapExpr },
}

impl Element {
    pub fn total(map: MapExpr) -> Self {
        Element::Total { map }
    }

    pub fn partial(map: PartialMapExpr) -> Self {
        Element::Partial { map }
    }

    pub fn as_total(&self) -> Option<&MapExpr> {
        match self {
            Element::Total { map } => Some(map),
            Element::Partial { .. } => None,
        }
    }

    pub fn is_partial(&self) -> bool {
        matches!(self, Element::Partial { .. })
    }

    /// The verifier never evaluates the body off the domain.
    pub fn compile(&self) -> Result<ElemFn> {
        match self {
            Element::Total { map } => {
                let f = map.compile()?;
                Ok(Arc::new(move |x| f(x).map(Some)))
            }
            Element::Partial { map } => {
                let (d, f) = (map.domain.compile()?, map.body.compile()?);
                Ok(Arc::new(move |x| if d(x)? { f(x).map(Some) } else { Ok(None) }))
            }
        }
    }
}

/// `f` followed by `g` as compiled partial functions.
pub fn then_fn(f: ElemFn, g: ElemFn) -> ElemFn {
    Arc::new(move |x| match f(x)? {
        Some(y) => g(y),
        None => Ok(None),
    })
}
