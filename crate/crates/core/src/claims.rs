//! Recorded inequalities between exact values, re-checkable offline.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radical::{compare_radicals, Comparison, RadicalValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Relation {
    pub fn accepts(self, ord: Ordering) -> bool {
        match self {
            Relation::Lt => ord == Ordering::Less,
            Relation::Le => ord != Ordering::Greater,
            Relation::Eq => ord == Ordering::Equal,
            Relation::Ge => ord != Ordering::Less,
            Relation::Gt => ord == Ordering::Greater,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `lhs relation rhs`, with the comparison that decided it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claim {
    pub label: String,
    pub lhs: RadicalValue,
    pub relation: Relation,
    pub rhs: RadicalValue,
    pub comparison: Comparison,
    pub holds: bool,
}

impl Claim {
    pub fn evaluate(
        label: impl Into<String>,
        lhs: RadicalValue,
        relation: Relation,
        rhs: RadicalValue,
        max_bits: u32,
    ) -> Result<Self> {
        let comparison = compare_radicals(&lhs, &rhs, max_bits)?;
        let holds = relation.accepts(comparison.ordering);
        Ok(Claim { label: label.into(), lhs, relation, rhs, comparison, holds })
    }

    /// Decide the claim again from `lhs` and `rhs` alone.
    pub fn recheck(&self, max_bits: u32) -> Result<bool> {
        let fresh = compare_radicals(&self.lhs, &self.rhs, max_bits)?;
        Ok(self.relation.accepts(fresh.ordering))
    }

    /// Error unless the claim holds.
    pub fn require(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::CertificateFailed(self.to_string()))
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} {} {}", self.label, self.lhs, self.relation.symbol(), self.rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{q, qi};
    use crate::radical::DEFAULT_MAX_BITS;

    #[test]
    fn relations() {
        assert!(Relation::Le.accepts(Ordering::Equal));
        assert!(!Relation::Lt.accepts(Ordering::Equal));
        assert!(Relation::Gt.accepts(Ordering::Greater));
    }

    #[test]
    fn claim_round_trip() {
        let lhs = RadicalValue::sqrt_rational(&qi(2)).unwrap();
        let c = Claim::evaluate("root two", lhs, Relation::Gt, RadicalValue::rational(q(141, 100)), DEFAULT_MAX_BITS).unwrap();
        assert!(c.holds);
        let back: Claim = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert!(back.recheck(DEFAULT_MAX_BITS).unwrap());
        let mut bad = back.clone();
        bad.relation = Relation::Lt;
        assert!(!bad.recheck(DEFAULT_MAX_BITS).unwrap());
        assert!(matches!(
            Claim::evaluate("x", RadicalValue::integer(1), Relation::Lt, RadicalValue::integer(0), 64).unwrap().require(),
            Err(Error::CertificateFailed(_))
        ));
    }
}
