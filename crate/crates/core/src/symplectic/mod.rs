//! Symplectic sums of a small catalog of building blocks.
//!
//! Summing along square-zero tori adds `(chi, c1^2)`; summing along a genus-2
//! surface adds one more to `chi` and eight more to `c1^2`. A planner inverts
//! these closed forms to realise lattice points, and a rewriter dissolves the
//! stabilised sums into connected sums of simple pieces.

mod blocks;
mod dissolve;
mod planner;
mod recipe;

pub use blocks::{sum_pair, Block};
pub use dissolve::{dissolve, Dissolution, DissolutionExpression, PendingCondition, RewriteStep, Rule, Term};
pub use planner::{plan_point, region_membership, RegionConfig, RegionTag};
pub use recipe::{fold_copywise, infinite_family, sum_invariants, Run, SumRecipe};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymplecticError {
    #[error("(chi, c1^2) = ({chi}, {c1sq}) is unreachable: {binding}")]
    Unreachable { chi: BigInt, c1sq: BigInt, binding: String },
    #[error("recipe is spin; dissolution needs a non-spin sum")]
    SpinRecipe,
    #[error("recipe has no elliptic block E(n) with n >= 2 to split")]
    NoEllipticSeam,
    #[error("recipe has no elliptic block E(n) with n >= 2")]
    NoEllipticBlock,
    #[error("recipe is not simply connected")]
    NotSimplyConnected,
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
}
