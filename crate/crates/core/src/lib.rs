//! Exact-integer geography of simply connected 4-manifolds.
//!
//! The crate builds and checks three kinds of objects:
//!
//! * iterated cyclic branched covers of the plane, including k-tuples of
//!   homeomorphic covers with pairwise distinct canonical divisibilities
//!   ([`branched_covers`], [`salvetti`]);
//! * symplectic sums of a small catalog of building blocks that realise
//!   lattice points of the `(chi, c1^2)` plane ([`symplectic`]);
//! * Einstein-metric verdicts assembled from those two sources
//!   ([`verdicts`]).
//!
//! All invariants are arbitrary-precision integers; rationals appear only as
//! exact `BigRational` slopes.

pub mod branched_covers;
pub mod error;
pub mod invariants;
pub mod json;
pub mod number_theory;
pub mod projective;
pub mod regression;
pub mod salvetti;
pub mod symplectic;
pub mod verdicts;

pub use error::{Error, ErrorClass};
pub use invariants::{CharNumbers, HomeoType, Parity};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Parses `"p/q"`, `"p"` or a finite decimal such as `"0.25"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational, String> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| format!("bad numerator in {text:?}"))?;
        let den: BigInt = den.trim().parse().map_err(|_| format!("bad denominator in {text:?}"))?;
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("bad decimal {text:?}"));
        }
        let negative = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| format!("bad decimal {text:?}"))?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| format!("bad decimal {text:?}"))?;
        let magnitude = BigRational::new(int * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let int: BigInt = text.parse().map_err(|_| format!("bad rational {text:?}"))?;
    Ok(BigRational::new(int, BigInt::one()))
}
