//! Iterated cyclic branched covers of the projective plane.
//!
//! Stage `j` of a tower is a `d_j`-fold cyclic cover branched over the
//! preimage of a smooth plane curve of degree `d_j m_j`. With
//! `K = sum (d_j - 1) m_j - 3` and `S = sum (d_j^2 - 1) m_j^2 - 3` the
//! characteristic numbers are
//!
//! ```text
//! c1^2  = (prod d_j) K^2
//! c2    = (prod d_j) (K^2 + S) / 2
//! sigma = -(prod d_j) S / 3
//! ```
//!
//! and the canonical class is `K` times the pullback of a line.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;
use thiserror::Error;

use crate::invariants::{CharNumbers, Parity};
use crate::json::JsonInt;
use crate::verdicts::{Assumption, RuleCheck, Status, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoverError {
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("canonical multiple {multiple} <= 0: not of general type")]
    NotGeneralType { multiple: BigInt },
    #[error("tower formulas are inconsistent: {0}")]
    InconsistentFormulas(String),
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CoverTower {
    #[serde_as(as = "Vec<(_, JsonInt)>")]
    stages: Vec<(u64, BigInt)>,
}

impl CoverTower {
    pub fn new(stages: Vec<(u64, BigInt)>) -> Result<Self, CoverError> {
        let tower = CoverTower { stages };
        tower.validate()?;
        Ok(tower)
    }

    pub fn from_small(stages: &[(u64, i64)]) -> Result<Self, CoverError> {
        Self::new(stages.iter().map(|&(d, m)| (d, BigInt::from(m))).collect())
    }

    pub fn validate(&self) -> Result<(), CoverError> {
        if self.stages.is_empty() {
            return Err(CoverError::InvalidTower("a tower needs at least one stage".into()));
        }
        for (d, m) in &self.stages {
            if *d < 2 {
                return Err(CoverError::InvalidTower(format!("degree {d} < 2")));
            }
            if !m.is_positive() {
                return Err(CoverError::InvalidTower(format!("curve parameter {m} < 1")));
            }
        }
        Ok(())
    }

    pub fn stages(&self) -> &[(u64, BigInt)] {
        &self.stages
    }

    pub fn degree_product(&self) -> BigInt {
        self.stages.iter().map(|(d, _)| BigInt::from(*d)).product()
    }

    /// `sum (d_j - 1) m_j - 3`, the multiple of the pulled-back line class
    /// equal to the canonical class.
    pub fn canonical_multiple(&self) -> BigInt {
        self.stages.iter().map(|(d, m)| BigInt::from(d - 1) * m).sum::<BigInt>() - 3
    }

    /// `sum (d_j^2 - 1) m_j^2 - 3`.
    pub fn signature_sum(&self) -> BigInt {
        self.stages.iter().map(|(d, m)| BigInt::from(d * d - 1) * m * m).sum::<BigInt>() - 3
    }

    pub fn parity(&self) -> Parity {
        Parity::from_divisibility(&self.canonical_multiple())
    }
}

pub fn chern(tower: &CoverTower) -> Result<CharNumbers, CoverError> {
    tower.validate()?;
    let prod = tower.degree_product();
    let k = tower.canonical_multiple();
    let s = tower.signature_sum();
    let k2 = &k * &k;
    let c1sq = &prod * &k2;
    let (c2, rem2) = (&prod * (&k2 + &s)).div_rem(&BigInt::from(2));
    let (sig, rem3) = (&prod * &s).div_rem(&BigInt::from(3));
    if !rem2.is_zero() || !rem3.is_zero() {
        return Err(CoverError::InconsistentFormulas(format!("non-integral c2 or sigma for {tower:?}")));
    }
    let cn = CharNumbers::from_e_sigma(c2, -sig).map_err(|e| CoverError::InconsistentFormulas(e.to_string()))?;
    if cn.c1sq() != &c1sq {
        return Err(CoverError::InconsistentFormulas(format!("c1^2 = {c1sq} but 2e + 3 sigma = {}", cn.c1sq())));
    }
    Ok(cn)
}

/// Divisibility of the canonical class; even exactly when the surface is spin.
pub fn canonical_divisibility(tower: &CoverTower) -> Result<BigInt, CoverError> {
    tower.validate()?;
    let k = tower.canonical_multiple();
    if !k.is_positive() {
        return Err(CoverError::NotGeneralType { multiple: k });
    }
    Ok(k)
}

/// Kähler–Einstein verdict: a positive canonical multiple is taken to mean
/// ample canonical bundle (recorded as an assumption), and then Aubin–Yau
/// applies. Iterated covers of the plane are always almost completely
/// decomposable.
pub fn einstein_flag(tower: &CoverTower) -> Verdict {
    let k = tower.canonical_multiple();
    let mut verdict = if k >= BigInt::one() {
        Verdict::new(
            Status::KeExists,
            vec![RuleCheck::AubinYau { canonical_multiple: k }],
            vec![Assumption::AmpleCanonical],
        )
    } else {
        Verdict::new(Status::Unknown, vec![RuleCheck::NotGeneralType { canonical_multiple: k }], vec![])
    };
    verdict.acd = Some(true);
    verdict
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tower(stages: &[(u64, i64)]) -> CoverTower {
        CoverTower::from_small(stages).unwrap()
    }

    /// Multiplicative characteristic numbers computed stage by stage: a
    /// `d`-fold cover branched along a curve `B` with `B = d L` in the
    /// previous surface, `L = m H`, has `K' = pi^*(K + (d-1) L)`,
    /// `e' = d e - (d-1) e(B)`, `sigma' = d sigma - (d^2-1)/(3d) B^2`.
    fn stagewise(stages: &[(u64, i64)]) -> (i128, i128, i128) {
        // Track degree of the cover, canonical multiple k (K = k H),
        // e and sigma as rationals scaled by 3.
        let mut deg: i128 = 1;
        let mut k: i128 = -3;
        let mut e3: i128 = 3 * 3;
        let mut s3: i128 = 3;
        for &(d, m) in stages {
            let (d, m) = (d as i128, m as i128);
            // Branch curve B = d m H on the current surface, H^2 = deg.
            let b2 = d * m * d * m * deg;
            let kb = k * d * m * deg;
            // adjunction: e(B) = -(K.B + B^2)
            let e_b = -(kb + b2);
            e3 = d * e3 - 3 * (d - 1) * e_b;
            s3 = d * s3 - (d * d - 1) * b2 / d;
            k += (d - 1) * m;
            deg *= d;
        }
        (deg * k * k, e3 / 3, s3 / 3)
    }

    #[test]
    fn examples() {
        let k3 = chern(&tower(&[(2, 3)])).unwrap();
        assert_eq!((k3.c1sq(), k3.sigma(), k3.e()), (&0.into(), &(-16).into(), &24.into()));
        let s = chern(&tower(&[(2, 5)])).unwrap();
        assert_eq!((s.c1sq(), s.sigma(), s.e(), s.chi()), (&8.into(), &(-48).into(), &76.into(), &7.into()));
        let t = chern(&tower(&[(2, 3), (2, 3)])).unwrap();
        assert_eq!((t.c1sq(), t.sigma()), (&36.into(), &(-68).into()));
    }

    #[test]
    fn divisibility_examples() {
        assert_eq!(canonical_divisibility(&tower(&[(2, 5)])).unwrap(), BigInt::from(2));
        assert_eq!(tower(&[(2, 5)]).parity(), Parity::Spin);
        assert_eq!(canonical_divisibility(&tower(&[(2, 3)])), Err(CoverError::NotGeneralType { multiple: 0.into() }));
        assert_eq!(canonical_divisibility(&tower(&[(3, 2)])).unwrap(), BigInt::one());
    }

    #[test]
    fn synthesis_shaped_divisibility() {
        // s double covers with parameters mu_j m0, then 16 stages of degree d.
        let m0 = 30i64;
        let d = 5u64;
        let xs: Vec<i64> = (1..=16).collect();
        let mut stages = vec![(2, 10), (2, 10), (2, 10)];
        stages.extend(xs.iter().map(|&x| (d, x)));
        let t = tower(&stages);
        let expected = m0 + (d as i64 - 1) * xs.iter().sum::<i64>() - 3;
        assert_eq!(canonical_divisibility(&t).unwrap(), BigInt::from(expected));
    }

    #[test]
    fn einstein_examples() {
        let v = einstein_flag(&tower(&[(2, 5)]));
        assert_eq!(v.status, Status::KeExists);
        assert_eq!(v.acd, Some(true));
        assert!(v.assumptions.contains(&Assumption::AmpleCanonical));
        assert_eq!(einstein_flag(&tower(&[(2, 3)])).status, Status::Unknown);
        assert_eq!(einstein_flag(&tower(&[(3, 2)])).status, Status::KeExists);
    }

    #[test]
    fn rejects_bad_stages() {
        assert!(CoverTower::from_small(&[]).is_err());
        assert!(CoverTower::from_small(&[(1, 3)]).is_err());
        assert!(CoverTower::from_small(&[(2, 0)]).is_err());
    }

    #[test]
    fn json_shape() {
        let t = tower(&[(2, 3), (5, 7)]);
        let text = serde_json::to_string(&t).unwrap();
        assert_eq!(text, r#"{"stages":[[2,3],[5,7]]}"#);
        assert_eq!(serde_json::from_str::<CoverTower>(&text).unwrap(), t);
    }

    proptest! {
        #[test]
        fn closed_form_matches_stagewise(
            stages in prop::collection::vec((2u64..6, 1i64..8), 1..4)
        ) {
            let cn = chern(&tower(&stages)).unwrap();
            let (c1sq, e, sigma) = stagewise(&stages);
            prop_assert_eq!(cn.c1sq(), &BigInt::from(c1sq));
            prop_assert_eq!(cn.e(), &BigInt::from(e));
            prop_assert_eq!(cn.sigma(), &BigInt::from(sigma));
        }

        #[test]
        fn permutation_invariant_and_square_quotient(
            stages in prop::collection::vec((2u64..9, 1i64..40), 1..6),
            rot in 0usize..6,
        ) {
            let t = tower(&stages);
            let mut shuffled = stages.clone();
            let len = shuffled.len();
            shuffled.rotate_left(rot % len);
            shuffled.reverse();
            let cn = chern(&t).unwrap();
            prop_assert_eq!(&cn, &chern(&tower(&shuffled)).unwrap());
            let prod = t.degree_product();
            prop_assert!(!cn.c1sq().is_negative());
            let (q, r) = cn.c1sq().div_rem(&prod);
            prop_assert!(r.is_zero());
            let k = t.canonical_multiple();
            prop_assert_eq!(q, &k * &k);
            prop_assert!((cn.c1sq() + cn.e()).is_multiple_of(&BigInt::from(12)));
        }
    }
}
