use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The semigroups of self-maps of ℕ handled here. Over ℕ the classes `F`
/// (finite-to-one) and `H` (infinite sets have infinite images) coincide: a
/// map with an infinite class sends that infinite set to a point, and a
/// finite-to-one map sends an infinite set to an infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ClassTag {
    T,
    F,
    Inj,
    Surj,
    Sym,
    BL,
    DBL,
    BL1,
    DBL1,
    SymBL,
    SymDBL,
    TNotInj,
    TNotSurj,
    I,
    PT,
}

impl ClassTag {
    pub const ALL: [ClassTag; 15] = [
        ClassTag::T,
        ClassTag::F,
        ClassTag::Inj,
        ClassTag::Surj,
        ClassTag::Sym,
        ClassTag::BL,
        ClassTag::DBL,
        ClassTag::BL1,
        ClassTag::DBL1,
        ClassTag::SymBL,
        ClassTag::SymDBL,
        ClassTag::TNotInj,
        ClassTag::TNotSurj,
        ClassTag::I,
        ClassTag::PT,
    ];

    pub fn is_partial(self) -> bool {
        matches!(self, ClassTag::I | ClassTag::PT)
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for ClassTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tag = match s {
            "T" => ClassTag::T,
            "F" | "H" => ClassTag::F,
            "Inj" => ClassTag::Inj,
            "Surj" => ClassTag::Surj,
            "Sym" => ClassTag::Sym,
            "BL" => ClassTag::BL,
            "DBL" => ClassTag::DBL,
            "BL1" => ClassTag::BL1,
            "DBL1" => ClassTag::DBL1,
            "SymBL" => ClassTag::SymBL,
            "SymDBL" => ClassTag::SymDBL,
            "TNotInj" => ClassTag::TNotInj,
            "TNotSurj" => ClassTag::TNotSurj,
            "I" => ClassTag::I,
            "PT" => ClassTag::PT,
            other => return Err(format!("unknown class `{other}`")),
        };
        Ok(tag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for t in ClassTag::ALL {
            assert_eq!(t.to_string().parse::<ClassTag>().unwrap(), t);
        }
        assert_eq!("H".parse::<ClassTag>().unwrap(), ClassTag::F);
        assert!("B".parse::<ClassTag>().is_err());
    }
}
