//! Crate-wide error with a coarse classification used for exit codes.

use serde::Serialize;
use thiserror::Error;

use crate::branched_covers::CoverError;
use crate::invariants::InvariantError;
use crate::number_theory::NumberTheoryError;
use crate::projective::ProjectiveError;
use crate::salvetti::SalvettiError;
use crate::symplectic::SymplecticError;
use crate::verdicts::VerdictError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    NumberTheory(#[from] NumberTheoryError),
    #[error(transparent)]
    Cover(#[from] CoverError),
    #[error(transparent)]
    Salvetti(#[from] SalvettiError),
    #[error(transparent)]
    Projective(#[from] ProjectiveError),
    #[error(transparent)]
    Symplectic(#[from] SymplecticError),
    #[error(transparent)]
    Verdict(#[from] VerdictError),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("internal error: {0}")]
    Internal(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorClass {
    /// Well-formed request with no solution (or none within the bounds).
    Infeasible,
    /// Input violates a precondition.
    Malformed,
    /// A self-check failed.
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Infeasible => 2,
            ErrorClass::Malformed => 3,
            ErrorClass::Internal => 1,
        }
    }
}

fn number_theory_class(e: &NumberTheoryError) -> ErrorClass {
    match e {
        NumberTheoryError::Exhausted { .. } => ErrorClass::Infeasible,
        NumberTheoryError::NonCoprimeModuli(..) | NumberTheoryError::InvalidArgument(_) => ErrorClass::Malformed,
        NumberTheoryError::Inconsistent(_) => ErrorClass::Infeasible,
    }
}

fn cover_class(e: &CoverError) -> ErrorClass {
    match e {
        CoverError::InvalidTower(_) => ErrorClass::Malformed,
        CoverError::NotGeneralType { .. } => ErrorClass::Infeasible,
        CoverError::InconsistentFormulas(_) => ErrorClass::Internal,
    }
}

fn salvetti_class(e: &SalvettiError) -> ErrorClass {
    match e {
        SalvettiError::OutOfWindow { .. }
        | SalvettiError::WindowFailure { .. }
        | SalvettiError::ParityConflict { .. } => ErrorClass::Infeasible,
        SalvettiError::ParityMismatch { .. } | SalvettiError::NonPositive { .. } | SalvettiError::InvalidSpec(_) => {
            ErrorClass::Malformed
        }
        SalvettiError::Verification(_) => ErrorClass::Internal,
        SalvettiError::NumberTheory(e) => number_theory_class(e),
        SalvettiError::Cover(e) => cover_class(e),
    }
}

fn symplectic_class(e: &SymplecticError) -> ErrorClass {
    match e {
        SymplecticError::Unreachable { .. } => ErrorClass::Infeasible,
        _ => ErrorClass::Malformed,
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Invariant(_) | Error::Projective(_) | Error::Malformed(_) => ErrorClass::Malformed,
            Error::NumberTheory(e) => number_theory_class(e),
            Error::Cover(e) => cover_class(e),
            Error::Salvetti(e) => salvetti_class(e),
            Error::Symplectic(e) => symplectic_class(e),
            Error::Verdict(e) => match e {
                VerdictError::SlopeOutOfRange { .. } | VerdictError::NoMatch(_) => ErrorClass::Infeasible,
                VerdictError::WrongArity { .. }
                | VerdictError::CongruenceViolation { .. }
                | VerdictError::Malformed(_)
                | VerdictError::Invariant(_) => ErrorClass::Malformed,
                VerdictError::HomeoMismatch(_) | VerdictError::Contradiction { .. } => ErrorClass::Internal,
                VerdictError::Synthesis(e) => salvetti_class(e),
                VerdictError::Symplectic(e) => symplectic_class(e),
                VerdictError::Cover(e) => cover_class(e),
            },
            Error::Internal(_) => ErrorClass::Internal,
        }
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> String {
        let debug = format!("{self:?}");
        let outer = debug.split(['(', ' ', '{']).next().unwrap_or("Error").to_string();
        let inner = debug
            .split_once('(')
            .map(|(_, rest)| rest.split(['(', ' ', '{', ')']).next().unwrap_or("").to_string())
            .unwrap_or_default();
        if inner.is_empty() || matches!(self, Error::Malformed(_) | Error::Internal(_)) {
            outer
        } else {
            format!("{outer}::{inner}")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn classes_and_codes() {
        let e: Error =
            SymplecticError::Unreachable { chi: BigInt::from(2), c1sq: BigInt::from(1), binding: "n".into() }.into();
        assert_eq!(e.class().exit_code(), 2);
        assert_eq!(e.kind(), "Symplectic::Unreachable");
        let e: Error = VerdictError::SlopeOutOfRange { slope: "8".into(), reason: "r".into() }.into();
        assert_eq!(e.class(), ErrorClass::Infeasible);
        let e: Error = ProjectiveError::InvalidInput("x".into()).into();
        assert_eq!(e.class().exit_code(), 3);
        assert_eq!(Error::Internal("x".into()).class().exit_code(), 1);
        assert_eq!(Error::Malformed("x".into()).kind(), "Malformed");
    }
}
