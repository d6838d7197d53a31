//! k-tuples of homeomorphic branched-cover surfaces whose canonical classes
//! have pairwise distinct divisibilities.
//!
//! A tower consists of `s` double covers with parameters `mu_j m0`, followed
//! by sixteen covers of a common prime degree `d` with parameters
//! `x_1..x_16`. For each `d` in a window of nearby primes the sixteen values
//! must satisfy `sum x = A_d` and `sum x^2 = B_d`, where `A_d` and `B_d` are
//! determined by two integers `C` and `C'` shared by all `d`. Sharing `C` and
//! `C'` makes all towers have the same `c1^2` and `sigma`.

mod represent;
mod synthesis;

pub use represent::{
    feasibility_window, salvetti_represent, salvetti_represent_seeded, FeasibilityWindow, WindowMethod,
    EXHAUSTIVE_LIMIT, PARTS,
};
pub use synthesis::{
    mu_squared, slope_report, synthesize, verify_result, DRecord, KTupleResult, KTupleSpec, M0Policy, ParityTarget,
    SlopeReport, SynthesisState,
};

use num_bigint::BigInt;
use thiserror::Error;

use crate::branched_covers::CoverError;
use crate::number_theory::NumberTheoryError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SalvettiError {
    #[error("A = {a} and B = {b} have different parity")]
    ParityMismatch { a: BigInt, b: BigInt },
    #[error("A = {a} must be positive")]
    NonPositive { a: BigInt },
    #[error("B = {b} is outside the window [{}, {}] for A = {a}", window.b_min, window.b_max)]
    OutOfWindow { a: BigInt, b: BigInt, window: Box<FeasibilityWindow> },
    #[error("window check failed at d = {d} for m0 = {m0}: {detail} (margin {margin}); try a larger m0")]
    WindowFailure { m0: BigInt, d: u64, detail: String, margin: BigInt },
    #[error("even divisibility needs odd mu denominators, found {denominator}")]
    ParityConflict { denominator: BigInt },
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}
