//! Einstein-metric verdicts with re-checkable rule chains.
//!
//! Existence comes from Aubin–Yau on surfaces with ample canonical bundle.
//! Obstructions come from LeBrun-type curvature estimates: a minimal
//! symplectic manifold with `c1^2 > 0` blown up at least `c1^2 / 3` times,
//! and connected sums of manifolds with non-trivial (Bauer–Furuta) stable
//! cohomotopy invariants blown up enough times. The gauge-theoretic inputs
//! enter only as named assumptions.

mod main_theorem;
mod pq;

pub use main_theorem::{assemble_main_theorem, predicted_slope, MainTheoremReport, SearchBounds, XEntry};
pub use pq::{pq_structures, PqReport, PqWitness};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;
use thiserror::Error;

use crate::json::JsonInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerdictError {
    #[error("expected {expected}, got {got} summands")]
    WrongArity { expected: &'static str, got: usize },
    #[error("summand {index} has b+ = {b_plus}, not 3 mod 4")]
    CongruenceViolation { index: usize, b_plus: BigInt },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("slope {slope} is out of range: {reason}")]
    SlopeOutOfRange { slope: String, reason: String },
    #[error("no blown-up recipe matches: {0}")]
    NoMatch(String),
    #[error("homeomorphism types disagree: {0}")]
    HomeoMismatch(String),
    #[error("contradictory verdicts for {descriptor}")]
    Contradiction { descriptor: String },
    #[error(transparent)]
    Synthesis(#[from] crate::salvetti::SalvettiError),
    #[error(transparent)]
    Symplectic(#[from] crate::symplectic::SymplecticError),
    #[error(transparent)]
    Invariant(#[from] crate::invariants::InvariantError),
    #[error(transparent)]
    Cover(#[from] crate::branched_covers::CoverError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    KeExists,
    Obstructed,
    Unknown,
}

/// Inputs taken on trust from the literature rather than computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Assumption {
    /// Positive canonical multiple read as ample canonical bundle.
    AmpleCanonical,
    /// The summed manifold is minimal and symplectic.
    MinimalSymplectic,
    /// Non-vanishing Seiberg–Witten (or stable cohomotopy) invariant.
    SwNontrivial,
    /// The `b+` congruence needed for the stable cohomotopy invariant.
    BplusCongruence,
    /// Logarithmic transforms yield pairwise non-diffeomorphic manifolds.
    DistinctSmoothStructures,
}

/// One re-checkable step of a verdict.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleCheck {
    /// Ample canonical bundle gives a Kähler–Einstein metric.
    AubinYau {
        #[serde_as(as = "JsonInt")]
        canonical_multiple: BigInt,
    },
    /// A catalogued surface recorded with ample canonical bundle.
    AubinYauCatalog { entry: String },
    /// The canonical multiple is not positive; nothing is claimed.
    NotGeneralType {
        #[serde_as(as = "JsonInt")]
        canonical_multiple: BigInt,
    },
    /// `3 b >= c1^2(minimal model)` (or `>` when strict).
    BlowupThreshold {
        #[serde_as(as = "JsonInt")]
        minimal_c1sq: BigInt,
        #[serde_as(as = "JsonInt")]
        blowups: BigInt,
        strict: bool,
    },
    /// Connected-sum threshold on the number of blowups.
    ConnectedSum {
        #[serde_as(as = "Vec<JsonInt>")]
        c1sqs: Vec<BigInt>,
        #[serde_as(as = "Vec<JsonInt>")]
        b_plus: Vec<BigInt>,
        #[serde_as(as = "JsonInt")]
        blowups: BigInt,
    },
    /// Why no claim was made.
    Unresolved { reason: String },
}

impl RuleCheck {
    /// Re-evaluates the recorded numeric check.
    pub fn replay(&self) -> bool {
        match self {
            RuleCheck::AubinYau { canonical_multiple } => canonical_multiple.is_positive(),
            RuleCheck::AubinYauCatalog { entry } => {
                crate::projective::catalog_lookup(entry).map(|e| e.ample_canonical).unwrap_or(false)
            }
            RuleCheck::NotGeneralType { canonical_multiple } => !canonical_multiple.is_positive(),
            RuleCheck::BlowupThreshold { minimal_c1sq, blowups, strict } => {
                blowup_obstruction_with(minimal_c1sq, blowups, *strict)
            }
            RuleCheck::ConnectedSum { c1sqs, b_plus, blowups } => {
                connected_sum_obstruction(c1sqs, b_plus, blowups).unwrap_or(false)
            }
            RuleCheck::Unresolved { .. } => true,
        }
    }

    pub fn is_obstruction(&self) -> bool {
        matches!(self, RuleCheck::BlowupThreshold { .. } | RuleCheck::ConnectedSum { .. })
    }

    pub fn is_existence(&self) -> bool {
        matches!(self, RuleCheck::AubinYau { .. } | RuleCheck::AubinYauCatalog { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub rule_chain: Vec<RuleCheck>,
    pub assumptions: Vec<Assumption>,
    /// Almost completely decomposable, when known.
    pub acd: Option<bool>,
}

impl Verdict {
    pub fn new(status: Status, rule_chain: Vec<RuleCheck>, assumptions: Vec<Assumption>) -> Self {
        Verdict { status, rule_chain, assumptions, acd: None }
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Verdict::new(Status::Unknown, vec![RuleCheck::Unresolved { reason: reason.into() }], vec![])
    }

    /// True when every rule replays and the status is backed by a rule of
    /// the matching kind.
    pub fn replay(&self) -> bool {
        let backed = match self.status {
            Status::KeExists => {
                self.rule_chain.iter().any(RuleCheck::is_existence)
                    && self.assumptions.contains(&Assumption::AmpleCanonical)
            }
            Status::Obstructed => self.rule_chain.iter().any(RuleCheck::is_obstruction),
            Status::Unknown => true,
        };
        backed && self.rule_chain.iter().all(RuleCheck::replay)
    }
}

/// Non-strict blowup threshold `3 b >= c1^2`.
pub fn blowup_obstruction(minimal_c1sq: &BigInt, blowups: &BigInt) -> bool {
    blowup_obstruction_with(minimal_c1sq, blowups, false)
}

/// Blowup threshold; no claim (false) unless `minimal_c1sq > 0` and `b >= 0`.
pub fn blowup_obstruction_with(minimal_c1sq: &BigInt, blowups: &BigInt, strict: bool) -> bool {
    if !minimal_c1sq.is_positive() || blowups.is_negative() {
        return false;
    }
    let lhs = BigInt::from(3) * blowups;
    if strict {
        &lhs > minimal_c1sq
    } else {
        &lhs >= minimal_c1sq
    }
}

/// Blowup threshold for `X_1 # ... # X_n # k (-CP2)` with `n` in `{2, 4}`:
/// `3k >= sum c1^2 - 12` for two summands, `3k >= sum c1^2 - 36` for four
/// with total `b+` not divisible by 8. Every `b+` must be `3 (mod 4)`.
pub fn connected_sum_obstruction(c1sqs: &[BigInt], b_plus: &[BigInt], blowups: &BigInt) -> Result<bool, VerdictError> {
    if c1sqs.len() != b_plus.len() {
        return Err(VerdictError::Malformed(format!("{} c1^2 values but {} b+ values", c1sqs.len(), b_plus.len())));
    }
    if blowups.is_negative() {
        return Err(VerdictError::Malformed(format!("blowup count {blowups} < 0")));
    }
    let offset = match c1sqs.len() {
        2 => 12,
        4 => 36,
        got => return Err(VerdictError::WrongArity { expected: "2 or 4", got }),
    };
    for (index, bp) in b_plus.iter().enumerate() {
        if bp.mod_floor(&BigInt::from(4)) != BigInt::from(3) {
            return Err(VerdictError::CongruenceViolation { index, b_plus: bp.clone() });
        }
    }
    let total: BigInt = c1sqs.iter().sum();
    let mut holds = BigInt::from(3) * blowups >= total - offset;
    if c1sqs.len() == 4 {
        let total_bplus: BigInt = b_plus.iter().sum();
        holds &= !total_bplus.mod_floor(&BigInt::from(8)).is_zero();
    }
    Ok(holds)
}

/// Records every verdict issued in a run and refuses contradictions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictLedger {
    entries: BTreeMap<String, Status>,
}

impl VerdictLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, descriptor: impl Into<String>, status: Status) -> Result<(), VerdictError> {
        let descriptor = descriptor.into();
        match (self.entries.get(&descriptor), status) {
            (Some(Status::KeExists), Status::Obstructed) | (Some(Status::Obstructed), Status::KeExists) => {
                Err(VerdictError::Contradiction { descriptor })
            }
            (Some(Status::KeExists | Status::Obstructed), Status::Unknown) => Ok(()),
            _ => {
                self.entries.insert(descriptor, status);
                Ok(())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn status(&self, descriptor: &str) -> Option<Status> {
        self.entries.get(descriptor).copied()
    }
}
