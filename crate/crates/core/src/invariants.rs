//! Characteristic numbers and the homeomorphism datum of simply connected
//! closed 4-manifolds.
//!
//! The two coordinate systems are `(chi, c1^2)` and `(e, sigma)`, related by
//! `c1^2 = 2e + 3 sigma` and `chi = (e + sigma) / 4`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;
use thiserror::Error;

use crate::json::JsonInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error("(e, sigma) = ({e}, {sigma}) does not satisfy e + sigma = 0 mod 4")]
    NonIntegralChi { e: BigInt, sigma: BigInt },
    #[error("not realizable by a simply connected 4-manifold: {reason}")]
    NonRealizable { reason: String },
    #[error("spin manifold with signature {sigma} not divisible by 16")]
    RokhlinViolation { sigma: BigInt },
    #[error("a spin manifold is never a connected sum of CP2 and its reverse")]
    SpinInput,
}

/// Exact invariant bundle of a candidate 4-manifold.
///
/// Only constructible through [`CharNumbers::from_chi_c1sq`] and
/// [`CharNumbers::from_e_sigma`], so the linear relations between the four
/// fields always hold.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCharNumbers")]
pub struct CharNumbers {
    #[serde_as(as = "JsonInt")]
    chi: BigInt,
    #[serde_as(as = "JsonInt")]
    c1sq: BigInt,
    #[serde_as(as = "JsonInt")]
    e: BigInt,
    #[serde_as(as = "JsonInt")]
    sigma: BigInt,
}

#[serde_as]
#[derive(Deserialize)]
struct RawCharNumbers {
    #[serde_as(as = "JsonInt")]
    chi: BigInt,
    #[serde_as(as = "JsonInt")]
    c1sq: BigInt,
    #[serde_as(as = "JsonInt")]
    e: BigInt,
    #[serde_as(as = "JsonInt")]
    sigma: BigInt,
}

impl TryFrom<RawCharNumbers> for CharNumbers {
    type Error = String;

    fn try_from(raw: RawCharNumbers) -> Result<Self, String> {
        let cn = CharNumbers::from_chi_c1sq(raw.chi, raw.c1sq);
        if cn.e != raw.e || cn.sigma != raw.sigma {
            return Err(format!("inconsistent characteristic numbers: expected e={}, sigma={}", cn.e, cn.sigma));
        }
        Ok(cn)
    }
}

impl CharNumbers {
    pub fn from_chi_c1sq(chi: impl Into<BigInt>, c1sq: impl Into<BigInt>) -> Self {
        let chi = chi.into();
        let c1sq = c1sq.into();
        let e = BigInt::from(12) * &chi - &c1sq;
        let sigma = &c1sq - BigInt::from(8) * &chi;
        CharNumbers { chi, c1sq, e, sigma }
    }

    /// Inverse coordinate change; defined exactly when `e + sigma = 0 (mod 4)`.
    pub fn from_e_sigma(e: impl Into<BigInt>, sigma: impl Into<BigInt>) -> Result<Self, InvariantError> {
        let e = e.into();
        let sigma = sigma.into();
        let sum: BigInt = &e + &sigma;
        if !sum.is_multiple_of(&BigInt::from(4)) {
            return Err(InvariantError::NonIntegralChi { e, sigma });
        }
        let chi = sum / 4;
        let c1sq = BigInt::from(2) * &e + BigInt::from(3) * &sigma;
        Ok(CharNumbers { chi, c1sq, e, sigma })
    }

    pub fn chi(&self) -> &BigInt {
        &self.chi
    }

    pub fn c1sq(&self) -> &BigInt {
        &self.c1sq
    }

    /// Topological Euler characteristic, equal to `c2`.
    pub fn e(&self) -> &BigInt {
        &self.e
    }

    pub fn c2(&self) -> &BigInt {
        &self.e
    }

    pub fn sigma(&self) -> &BigInt {
        &self.sigma
    }

    /// `b2+` of a simply connected manifold with these numbers (may be negative
    /// for non-realizable input).
    pub fn b_plus(&self) -> BigInt {
        (&self.e + &self.sigma - 2) / 2
    }

    pub fn b_minus(&self) -> BigInt {
        (&self.e - &self.sigma - 2) / 2
    }

    /// Connected sum with `count` copies of the reversed projective plane.
    pub fn blown_up(&self, count: &BigInt) -> Self {
        CharNumbers::from_chi_c1sq(self.chi.clone(), &self.c1sq - count)
    }

    /// `c1^2 / chi`; `None` when `chi = 0`.
    pub fn slope(&self) -> Option<BigRational> {
        (!self.chi.is_zero()).then(|| BigRational::new(self.c1sq.clone(), self.chi.clone()))
    }

    /// `|sigma| / e`; `None` when `e = 0`.
    pub fn signature_ratio(&self) -> Option<BigRational> {
        (!self.e.is_zero()).then(|| BigRational::new(self.sigma.abs(), self.e.clone()))
    }

    pub fn hitchin_thorpe(&self) -> HitchinThorpe {
        hitchin_thorpe(self)
    }
}

impl fmt::Display for CharNumbers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi={} c1^2={} e={} sigma={}", self.chi, self.c1sq, self.e, self.sigma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Spin,
    NonSpin,
}

impl Parity {
    /// Parity of a surface whose canonical class has the given divisibility.
    pub fn from_divisibility(divisibility: &BigInt) -> Self {
        if divisibility.is_even() {
            Parity::Spin
        } else {
            Parity::NonSpin
        }
    }
}

/// Freedman's classification datum for simply connected closed 4-manifolds
/// (restricted to the smoothable, hence Rokhlin-constrained, case).
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomeoType {
    #[serde_as(as = "JsonInt")]
    pub b_plus: BigInt,
    #[serde_as(as = "JsonInt")]
    pub b_minus: BigInt,
    pub parity: Parity,
    pub simply_connected: bool,
}

impl fmt::Display for HomeoType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parity = match self.parity {
            Parity::Spin => "spin",
            Parity::NonSpin => "non-spin",
        };
        write!(f, "b+={} b-={} {parity}", self.b_plus, self.b_minus)
    }
}

pub fn homeo_type(cn: &CharNumbers, parity: Parity) -> Result<HomeoType, InvariantError> {
    if cn.e < BigInt::from(2) {
        return Err(InvariantError::NonRealizable { reason: format!("Euler characteristic {} < 2", cn.e) });
    }
    let plus2: BigInt = &cn.e + &cn.sigma - 2;
    let minus2: BigInt = &cn.e - &cn.sigma - 2;
    if plus2.is_odd() || plus2.is_negative() || minus2.is_negative() {
        return Err(InvariantError::NonRealizable {
            reason: format!("b2+ = ({plus2})/2 and b2- = ({minus2})/2 must be non-negative integers"),
        });
    }
    if parity == Parity::Spin && !cn.sigma.is_multiple_of(&BigInt::from(16)) {
        return Err(InvariantError::RokhlinViolation { sigma: cn.sigma.clone() });
    }
    Ok(HomeoType { b_plus: plus2 / 2, b_minus: minus2 / 2, parity, simply_connected: true })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HitchinThorpe {
    Strict,
    Equality,
    Violated,
}

/// Sign of `2e - 3|sigma|`.
pub fn hitchin_thorpe(cn: &CharNumbers) -> HitchinThorpe {
    let margin = BigInt::from(2) * &cn.e - BigInt::from(3) * cn.sigma.abs();
    match margin.sign() {
        num_bigint::Sign::Plus => HitchinThorpe::Strict,
        num_bigint::Sign::NoSign => HitchinThorpe::Equality,
        num_bigint::Sign::Minus => HitchinThorpe::Violated,
    }
}

/// `(p, q)` with the manifold stably of the form `p CP2 # q (-CP2)`; the
/// stabilisation by one `CP2` has target `(p + 1, q)`.
pub fn dissolve_target(ht: &HomeoType) -> Result<(BigInt, BigInt), InvariantError> {
    match ht.parity {
        Parity::Spin => Err(InvariantError::SpinInput),
        Parity::NonSpin => Ok((ht.b_plus.clone(), ht.b_minus.clone())),
    }
}
