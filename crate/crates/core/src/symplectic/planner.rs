use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::blocks::Block;
use super::recipe::{sum_invariants, SumRecipe};
use super::SymplecticError;
use crate::invariants::CharNumbers;
use crate::json::{JsonInt, JsonRational};

/// Extra values of `l` tried above the smallest one that brings the remainder
/// into the wedge.
const L_SLACK: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegionTag {
    /// `y <= 3x - 51` and `y <= 6x - c0`.
    Wedge,
    /// `y <= (9 - eps) x - c_geo`.
    Geo,
    /// `y <= (6 - eps) x - c_ne`.
    NonEinstein,
}

impl RegionTag {
    pub fn name(self) -> &'static str {
        match self {
            RegionTag::Wedge => "wedge",
            RegionTag::Geo => "geo",
            RegionTag::NonEinstein => "non-einstein",
        }
    }
}

/// Constants of the region inequalities and the `Y(i)` blocks the planner may
/// use.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionConfig {
    #[serde_as(as = "JsonRational")]
    pub epsilon: BigRational,
    #[serde_as(as = "JsonInt")]
    pub c0: BigInt,
    pub y_indices: Vec<u64>,
}

impl Default for RegionConfig {
    fn default() -> Self {
        RegionConfig {
            epsilon: BigRational::new(BigInt::one(), BigInt::from(3)),
            c0: BigInt::from(72),
            y_indices: (1..=12).collect(),
        }
    }
}

impl RegionConfig {
    pub fn validate(&self) -> Result<(), SymplecticError> {
        if !self.epsilon.is_positive() || self.epsilon >= BigRational::from_integer(BigInt::from(3)) {
            return Err(SymplecticError::InvalidRecipe(format!("epsilon {} outside (0, 3)", self.epsilon)));
        }
        if self.y_indices.contains(&0) {
            return Err(SymplecticError::InvalidRecipe("Y block indices start at 1".into()));
        }
        Ok(())
    }

    /// Smallest `i` with `c1^2(Y(i)) / chi(Y(i)) >= 9 - eps`.
    pub fn geo_index(&self) -> u64 {
        let target = BigRational::from_integer(BigInt::from(9)) - &self.epsilon;
        (1u64..)
            .find(|&i| {
                let n = Block::Y { i }.numbers();
                BigRational::new(n.c1sq().clone(), n.chi().clone()) >= target
            })
            .expect("Y slopes tend to 9")
    }

    /// Offset that guarantees `geo_index` copies of `Y` plus a wedge
    /// remainder reach every point under the geo line.
    pub fn c_geo(&self) -> BigInt {
        let n = Block::Y { i: self.geo_index() }.numbers();
        let (chi, c) = (n.chi(), n.c1sq());
        let num: BigInt = c * (c - BigInt::from(3) * chi + 51);
        num.div_ceil(&(BigInt::from(3) * chi))
    }

    /// Offset under which `ceil(3y / 2)` stays under the geo line.
    pub fn c_ne(&self) -> BigInt {
        (BigInt::from(2) * (self.c_geo() + BigInt::one())).div_ceil(&BigInt::from(3))
    }

    fn indices(&self) -> Vec<u64> {
        let geo = self.geo_index();
        let mut out = vec![geo];
        out.extend(self.y_indices.iter().rev().copied().filter(|&i| i != geo));
        out
    }
}

/// Region tags whose inequalities hold at `(chi, c1sq)`.
pub fn region_membership(chi: &BigInt, c1sq: &BigInt, config: &RegionConfig) -> BTreeSet<RegionTag> {
    let mut tags = BTreeSet::new();
    let x = BigRational::from_integer(chi.clone());
    let y = BigRational::from_integer(c1sq.clone());
    let lin = |slope: BigRational, offset: BigInt| y <= slope * &x - BigRational::from_integer(offset);
    let int = |v: i64| BigRational::from_integer(BigInt::from(v));
    if lin(int(3), BigInt::from(51)) && lin(int(6), config.c0.clone()) {
        tags.insert(RegionTag::Wedge);
    }
    if lin(int(9) - &config.epsilon, config.c_geo()) {
        tags.insert(RegionTag::Geo);
    }
    if lin(int(6) - &config.epsilon, config.c_ne()) {
        tags.insert(RegionTag::NonEinstein);
    }
    tags
}

/// Wedge part `X(k, r, n)` for `y >= 1`, with `y = 9k + r - 8`, `0 <= r <= 8`.
fn wedge_parts(chi: &BigInt, y: &BigInt) -> Result<(BigInt, BigInt, BigInt), String> {
    let (k, r) = (y + BigInt::from(8)).div_mod_floor(&BigInt::from(9));
    let n = chi - BigInt::from(3) * &k - BigInt::from(2) * &r + 1;
    if n < BigInt::from(2) {
        return Err(format!("n = chi - 3k - 2r + 1 = {n} < 2 with k = {k}, r = {r}"));
    }
    Ok((k, r, n))
}

fn unreachable(chi: &BigInt, c1sq: &BigInt, binding: impl Into<String>) -> SymplecticError {
    SymplecticError::Unreachable { chi: chi.clone(), c1sq: c1sq.clone(), binding: binding.into() }
}

/// Recipe realising `(chi, c1sq)` from minimal blocks.
pub fn plan_point(chi: &BigInt, c1sq: &BigInt, config: &RegionConfig) -> Result<SumRecipe, SymplecticError> {
    config.validate()?;
    if !chi.is_positive() {
        return Err(unreachable(chi, c1sq, "chi > 0"));
    }
    if c1sq.is_negative() {
        return Err(unreachable(chi, c1sq, "c1^2 >= 0"));
    }
    let recipe = search(chi, c1sq, config)?;
    let got = sum_invariants(&recipe);
    if got != CharNumbers::from_chi_c1sq(chi.clone(), c1sq.clone()) {
        return Err(SymplecticError::InvalidRecipe(format!(
            "planned {recipe} folds to ({}, {})",
            got.chi(),
            got.c1sq()
        )));
    }
    Ok(recipe)
}

fn search(chi: &BigInt, y: &BigInt, config: &RegionConfig) -> Result<SumRecipe, SymplecticError> {
    if y.is_zero() {
        if chi < &BigInt::from(2) {
            return Err(unreachable(chi, y, "E(chi) needs chi >= 2 to be minimal"));
        }
        return Ok(SumRecipe::single(Block::elliptic(chi.clone())));
    }
    let wedge_err = match wedge_parts(chi, y) {
        Ok((k, r, n)) => return SumRecipe::x_krn(k, r, n),
        Err(e) => e,
    };
    let excess: BigInt = y - BigInt::from(3) * chi + 51;
    for i in config.indices() {
        let yn = Block::Y { i }.numbers();
        let gain = yn.c1sq() - BigInt::from(3) * yn.chi();
        let l0 = excess.div_ceil(&gain).max(BigInt::one());
        let mut l = l0.clone();
        while l <= &l0 + L_SLACK && &l * yn.c1sq() <= *y {
            let rest_chi = chi - &l * yn.chi();
            let rest_y = y - &l * yn.c1sq();
            if rest_chi.is_positive() {
                if rest_y.is_zero() && rest_chi >= BigInt::from(2) {
                    return SumRecipe::new(vec![
                        super::Run::new(Block::Y { i }, l, 1),
                        super::Run::new(Block::elliptic(rest_chi), 1, 1),
                    ]);
                }
                if rest_y.is_positive() {
                    if let Ok((k, r, n)) = wedge_parts(&rest_chi, &rest_y) {
                        return SumRecipe::y_lkrn(Some(i), l, k, r, n);
                    }
                }
            }
            l += 1;
        }
    }
    Err(unreachable(chi, y, format!("l = 0: {wedge_err}; no Y(i) extension fits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn examples() {
        let cfg = RegionConfig::default();
        assert_eq!(plan_point(&n(10), &n(10), &cfg).unwrap(), SumRecipe::x_krn(2, 0, 5).unwrap());
        assert!(matches!(plan_point(&n(2), &n(1), &cfg), Err(SymplecticError::Unreachable { .. })));
        assert_eq!(plan_point(&n(5), &n(0), &cfg).unwrap(), SumRecipe::single(Block::elliptic(5)));
        assert!(plan_point(&n(1), &n(0), &cfg).is_err());
        assert!(plan_point(&n(0), &n(0), &cfg).is_err());
        assert!(plan_point(&n(5), &n(-1), &cfg).is_err());
    }

    #[test]
    fn regions() {
        let cfg = RegionConfig::default();
        assert!(region_membership(&n(100), &n(240), &cfg).contains(&RegionTag::Wedge));
        assert!(!region_membership(&n(10), &n(60), &cfg).contains(&RegionTag::Wedge));
        for chi in 18..300 {
            assert!(region_membership(&n(chi), &n(0), &cfg).contains(&RegionTag::Wedge));
        }
        assert_eq!(cfg.geo_index(), 11);
    }

    #[test]
    fn geo_index_is_first_steep_enough() {
        let cfg = RegionConfig::default();
        let target = BigRational::new(n(26), n(3));
        let slope = |i| {
            let b = Block::Y { i }.numbers();
            BigRational::new(b.c1sq().clone(), b.chi().clone())
        };
        let g = cfg.geo_index();
        assert!(slope(g) >= target && slope(g - 1) < target);
    }

    #[test]
    fn geo_region_is_planned() {
        let cfg = RegionConfig::default();
        let i = cfg.geo_index();
        let chi_y = Block::Y { i }.numbers().chi().clone();
        let mut hits = 0;
        for mult in [4i64, 9, 25] {
            let chi: BigInt = &chi_y * mult + 17;
            let top = (BigRational::from_integer(BigInt::from(9)) - &cfg.epsilon)
                * BigRational::from_integer(chi.clone())
                - BigRational::from_integer(cfg.c_geo());
            let top = top.floor().to_integer();
            let mut y = top.clone();
            while y > &top - 300 {
                if y.is_positive() {
                    assert!(region_membership(&chi, &y, &cfg).contains(&RegionTag::Geo));
                    plan_point(&chi, &y, &cfg).unwrap();
                    hits += 1;
                }
                y -= 1;
            }
        }
        assert!(hits > 0);
    }
}
