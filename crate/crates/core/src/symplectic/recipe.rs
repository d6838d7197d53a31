use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::blocks::{sum_pair, Block};
use super::SymplecticError;
use crate::invariants::{CharNumbers, Parity};
use crate::json::JsonInt;

/// `count` copies of `block`, each summed onto everything before it along a
/// surface of genus `seam_genus`. For the first run the seam applies to
/// copies `2..=count`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Run {
    pub block: Block,
    #[serde_as(as = "JsonInt")]
    pub count: BigInt,
    pub seam_genus: u32,
}

impl Run {
    pub fn new(block: Block, count: impl Into<BigInt>, seam_genus: u32) -> Self {
        Run { block, count: count.into(), seam_genus }
    }
}

/// Symplectic sum of building blocks, run-length encoded, followed by
/// blowups. `log_transforms` tags the multiplicities of logarithmic
/// transforms applied inside the elliptic block.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SumRecipe {
    pub runs: Vec<Run>,
    #[serde_as(as = "JsonInt")]
    pub blowups: BigInt,
    #[serde(default)]
    pub log_transforms: Vec<u64>,
}

impl SumRecipe {
    pub fn new(runs: Vec<Run>) -> Result<Self, SymplecticError> {
        let recipe = SumRecipe { runs, blowups: BigInt::zero(), log_transforms: Vec::new() };
        recipe.validate()?;
        Ok(recipe)
    }

    pub fn single(block: Block) -> Self {
        SumRecipe { runs: vec![Run::new(block, 1, 1)], blowups: BigInt::zero(), log_transforms: Vec::new() }
    }

    /// `X(k, r, n)`: `k` copies of `S` along the genus-2 surface, then `r`
    /// copies of `S` and one `E(n)` along tori.
    pub fn x_krn(k: impl Into<BigInt>, r: impl Into<BigInt>, n: impl Into<BigInt>) -> Result<Self, SymplecticError> {
        Self::y_lkrn(None, 0, k, r, n)
    }

    /// `Y(l, k, r, n)`: `X(k, r, n)` with `l` copies of `Y(i)` summed in
    /// along tori between the genus-2 chain and the torus summands.
    pub fn y_lkrn(
        y_index: Option<u64>,
        l: impl Into<BigInt>,
        k: impl Into<BigInt>,
        r: impl Into<BigInt>,
        n: impl Into<BigInt>,
    ) -> Result<Self, SymplecticError> {
        let (l, k, r) = (l.into(), k.into(), r.into());
        let mut runs = Vec::new();
        if k.is_positive() {
            runs.push(Run::new(Block::S, k, 2));
        }
        if let Some(i) = y_index {
            if l.is_positive() {
                runs.push(Run::new(Block::Y { i }, l, 1));
            }
        }
        if r.is_positive() {
            runs.push(Run::new(Block::S, r, 1));
        }
        runs.push(Run::new(Block::elliptic(n), 1, 1));
        Self::new(runs)
    }

    pub fn with_blowups(mut self, blowups: impl Into<BigInt>) -> Self {
        self.blowups = blowups.into();
        self
    }

    pub fn validate(&self) -> Result<(), SymplecticError> {
        let bad = |m: String| Err(SymplecticError::InvalidRecipe(m));
        if self.runs.is_empty() {
            return bad("a recipe needs at least one block".into());
        }
        if self.blowups.is_negative() {
            return bad(format!("negative blowup count {}", self.blowups));
        }
        for (idx, run) in self.runs.iter().enumerate() {
            if !run.count.is_positive() {
                return bad(format!("run {idx} has count {}", run.count));
            }
            if !matches!(run.seam_genus, 1 | 2) {
                return bad(format!("seam genus {} outside {{1, 2}}", run.seam_genus));
            }
            match &run.block {
                Block::Elliptic { n } if !n.is_positive() => return bad(format!("E({n}) needs n >= 1")),
                Block::K3BlownUp { j } if j.is_negative() => return bad(format!("K3 blown up {j} times")),
                Block::X { i: 0 } | Block::Y { i: 0 } => return bad("block index must be at least 1".into()),
                _ => {}
            }
            let joins_previous = idx > 0;
            let joins_itself = run.count > BigInt::one();
            if (joins_previous || joins_itself) && !run.block.has_surface(run.seam_genus) {
                return bad(format!("{} has no genus-{} seam", run.block, run.seam_genus));
            }
            if joins_previous && !self.runs[idx - 1].block.has_surface(run.seam_genus) {
                return bad(format!(
                    "{} cannot be summed to {} along genus {}",
                    run.block,
                    self.runs[idx - 1].block,
                    run.seam_genus
                ));
            }
        }
        Ok(())
    }

    /// Number of seams in each run.
    fn seam_counts(&self) -> impl Iterator<Item = (u32, BigInt)> + '_ {
        self.runs.iter().enumerate().map(|(idx, run)| {
            let seams = if idx == 0 { &run.count - 1 } else { run.count.clone() };
            (run.seam_genus, seams)
        })
    }

    pub fn block_count(&self) -> BigInt {
        self.runs.iter().map(|r| &r.count).sum()
    }

    /// Every seam has a side whose complement is simply connected, and no
    /// block has non-trivial fundamental group of its own.
    pub fn simply_connected(&self) -> bool {
        self.runs.iter().enumerate().all(|(idx, run)| {
            run.block.simply_connected()
                && (idx == 0
                    || run.block.sc_complement(run.seam_genus)
                    || self.runs[idx - 1].block.sc_complement(run.seam_genus))
        })
    }

    /// Spin exactly when every block is spin and nothing was blown up.
    pub fn parity(&self) -> Parity {
        if self.blowups.is_zero() && self.runs.iter().all(|r| r.block.spin()) {
            Parity::Spin
        } else {
            Parity::NonSpin
        }
    }

    /// Minimal exactly when every block is minimal and nothing was blown up.
    pub fn minimal(&self) -> bool {
        self.blowups.is_zero() && self.runs.iter().all(|r| r.block.minimal())
    }

    pub fn acd(&self) -> Option<bool> {
        self.runs.iter().all(|r| r.block.acd() == Some(true)).then_some(true)
    }

    pub fn elliptic_n(&self) -> Option<&BigInt> {
        self.runs.iter().find_map(|r| match &r.block {
            Block::Elliptic { n } if n > &BigInt::one() => Some(n),
            _ => None,
        })
    }

    /// Expanded block list and seam list, copy by copy. `None` when the
    /// recipe has more than `limit` blocks.
    pub fn expand(&self, limit: usize) -> Option<(Vec<Block>, Vec<u32>)> {
        if self.block_count() > BigInt::from(limit) {
            return None;
        }
        let mut blocks = Vec::new();
        let mut seams = Vec::new();
        for run in &self.runs {
            for _ in 0..run.count.to_usize()? {
                if !blocks.is_empty() {
                    seams.push(run.seam_genus);
                }
                blocks.push(run.block.clone());
            }
        }
        Some((blocks, seams))
    }
}

impl fmt::Display for SumRecipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, run) in self.runs.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}x{}@g{}", run.block, run.count, run.seam_genus)?;
        }
        if self.blowups.is_positive() {
            write!(f, " # {}CP2bar", self.blowups)?;
        }
        if !self.log_transforms.is_empty() {
            let tags: Vec<String> = self.log_transforms.iter().map(u64::to_string).collect();
            write!(f, " [log {}]", tags.join(","))?;
        }
        Ok(())
    }
}

/// Closed-form invariants of a recipe: additive over blocks, plus `g - 1`
/// to `chi` and `8(g - 1)` to `c1^2` per seam of genus `g`, minus blowups.
pub fn sum_invariants(recipe: &SumRecipe) -> CharNumbers {
    let mut chi = BigInt::zero();
    let mut c1sq = BigInt::zero();
    for run in &recipe.runs {
        let n = run.block.numbers();
        chi += &run.count * n.chi();
        c1sq += &run.count * n.c1sq();
    }
    for (genus, seams) in recipe.seam_counts() {
        let g = BigInt::from(genus) - 1;
        chi += &seams * &g;
        c1sq += BigInt::from(8) * &seams * &g;
    }
    CharNumbers::from_chi_c1sq(chi, c1sq - &recipe.blowups)
}

/// Left fold over every block copy using [`sum_pair`]; `None` when the
/// recipe is too large to expand.
pub fn fold_copywise(recipe: &SumRecipe, limit: usize) -> Option<CharNumbers> {
    let (blocks, seams) = recipe.expand(limit)?;
    let mut acc = blocks[0].numbers();
    for (block, genus) in blocks[1..].iter().zip(seams) {
        acc = sum_pair(&acc, &block.numbers(), genus);
    }
    Some(acc.blown_up(&recipe.blowups))
}

/// Copies of `recipe` tagged with each logarithmic-transform multiplicity.
/// The transforms happen inside the elliptic block and leave `(chi, c1^2)`
/// unchanged.
pub fn infinite_family(recipe: &SumRecipe, multiplicities: &[u64]) -> Result<Vec<SumRecipe>, SymplecticError> {
    if recipe.elliptic_n().is_none() {
        return Err(SymplecticError::NoEllipticBlock);
    }
    let mut seen = std::collections::BTreeSet::new();
    for &m in multiplicities {
        if m < 2 || !seen.insert(m) {
            return Err(SymplecticError::InvalidRecipe(format!(
                "multiplicities must be distinct and at least 2, got {m}"
            )));
        }
    }
    Ok(multiplicities
        .iter()
        .map(|&m| {
            let mut member = recipe.clone();
            member.log_transforms.push(m);
            member
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let r = SumRecipe::new(vec![Run::new(Block::elliptic(2), 1, 1), Run::new(Block::elliptic(3), 1, 1)]).unwrap();
        assert_eq!(sum_invariants(&r), CharNumbers::from_chi_c1sq(5, 0));
        let x = SumRecipe::x_krn(2, 0, 5).unwrap();
        assert_eq!(sum_invariants(&x), CharNumbers::from_chi_c1sq(10, 10));
        let s =
            SumRecipe::new(vec![Run::new(Block::S, 1, 1), Run::new(Block::elliptic(2), 1, 1)]).unwrap().with_blowups(1);
        let cn = sum_invariants(&s);
        assert_eq!((cn.chi(), cn.c1sq()), (&BigInt::from(4), &BigInt::from(0)));
    }

    #[test]
    fn closed_forms_match_fold() {
        for k in 1..=20i64 {
            for r in 0..=8i64 {
                for n in 2..=20i64 {
                    let x = SumRecipe::x_krn(k, r, n).unwrap();
                    let expected = CharNumbers::from_chi_c1sq(3 * k + 2 * r + n - 1, 9 * k + r - 8);
                    assert_eq!(sum_invariants(&x), expected);
                    assert_eq!(fold_copywise(&x, 100).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn validation() {
        assert!(SumRecipe::new(vec![]).is_err());
        assert!(SumRecipe::new(vec![Run::new(Block::elliptic(2), 2, 2)]).is_err());
        assert!(SumRecipe::new(vec![Run::new(Block::S, 0, 2)]).is_err());
        assert!(SumRecipe::new(vec![Run::new(Block::S, 1, 3)]).is_err());
        assert!(SumRecipe::new(vec![Run::new(Block::elliptic(0), 1, 1)]).is_err());
    }

    #[test]
    fn flags() {
        let x = SumRecipe::x_krn(2, 1, 4).unwrap();
        assert!(x.simply_connected());
        assert!(x.minimal());
        assert_eq!(x.parity(), Parity::NonSpin);
        assert_eq!(SumRecipe::single(Block::elliptic(4)).parity(), Parity::Spin);
        let nsc = SumRecipe::new(vec![Run::new(Block::X { i: 1 }, 1, 1), Run::new(Block::elliptic(2), 1, 1)]).unwrap();
        assert!(!nsc.simply_connected());
        assert_eq!(x.to_string(), "Sx2@g2 + Sx1@g1 + E(4)x1@g1");
    }

    #[test]
    fn families() {
        let x = SumRecipe::x_krn(2, 0, 5).unwrap();
        let fam = infinite_family(&x, &[2, 3, 5, 7]).unwrap();
        assert_eq!(fam.len(), 4);
        for m in &fam {
            assert_eq!(sum_invariants(m), sum_invariants(&x));
        }
        let tags: std::collections::BTreeSet<_> = fam.iter().map(|m| m.log_transforms.clone()).collect();
        assert_eq!(tags.len(), 4);
        let no_e = SumRecipe::single(Block::S);
        assert_eq!(infinite_family(&no_e, &[2]), Err(SymplecticError::NoEllipticBlock));
        assert!(infinite_family(&x, &[2, 2]).is_err());
    }

    #[test]
    fn huge_counts_stay_closed_form() {
        let k: BigInt = num_traits::pow(BigInt::from(10), 150);
        let x = SumRecipe::x_krn(k.clone(), 3, 7).unwrap();
        let cn = sum_invariants(&x);
        assert_eq!(cn.c1sq(), &(BigInt::from(9) * &k + 3 - 8));
        assert!(fold_copywise(&x, 1000).is_none());
    }
}
