//! Inequality reports shared by the map-level and generator-level checkers.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Identifier of one of the inequalities checked by this crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InequalityId {
    #[serde(rename = "MAP_BOUND")]
    MapBound,
    #[serde(rename = "TRIVIAL_BOUND")]
    TrivialBound,
    #[serde(rename = "GEN_BOUND")]
    GenBound,
    #[serde(rename = "RELAX_RATE")]
    RelaxRate,
    #[serde(rename = "LEMMA_TG")]
    LemmaTg,
    #[serde(rename = "OPTIMALITY")]
    Optimality,
    #[serde(rename = "CONJECTURE")]
    Conjecture,
}

impl InequalityId {
    pub const ALL: [InequalityId; 7] = [
        InequalityId::MapBound,
        InequalityId::TrivialBound,
        InequalityId::GenBound,
        InequalityId::RelaxRate,
        InequalityId::LemmaTg,
        InequalityId::Optimality,
        InequalityId::Conjecture,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            InequalityId::MapBound => "MAP_BOUND",
            InequalityId::TrivialBound => "TRIVIAL_BOUND",
            InequalityId::GenBound => "GEN_BOUND",
            InequalityId::RelaxRate => "RELAX_RATE",
            InequalityId::LemmaTg => "LEMMA_TG",
            InequalityId::Optimality => "OPTIMALITY",
            InequalityId::Conjecture => "CONJECTURE",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        InequalityId::ALL
            .iter()
            .copied()
            .find(|id| id.as_str() == s)
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of one inequality check.
///
/// For the `≤`-type inequalities the slack is `rhs − lhs` and
/// `satisfied == (slack >= -tolerance)`. `OPTIMALITY` asserts a strict
/// violation `lhs > rhs`, so there the slack is `lhs − rhs` and
/// `satisfied == (slack > tolerance)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality_id: InequalityId,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
    pub tolerance: f64,
}

impl BoundReport {
    /// Report for a non-strict inequality `lhs ≤ rhs`.
    pub fn le(inequality_id: InequalityId, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            inequality_id,
            lhs,
            rhs,
            slack,
            satisfied: slack >= -tolerance,
            tolerance,
        }
    }

    /// Report for a strict violation claim `lhs > rhs`.
    pub fn strict_gt(inequality_id: InequalityId, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            inequality_id,
            lhs,
            rhs,
            slack,
            satisfied: slack > tolerance,
            tolerance,
        }
    }
}
