use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::blocks::Block;
use super::recipe::{sum_invariants, SumRecipe};
use super::SymplecticError;
use crate::invariants::Parity;
use crate::json::JsonInt;

/// Summand of a dissolution expression. `Seam(g)` is the bookkeeping term
/// for a symplectic sum along a genus-`g` surface still to be removed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Term {
    Block(Block),
    Seam(u32),
    Cp2,
    Cp2Bar,
    S2xS2,
}

impl Term {
    /// `(e - 2, sigma)`; these add under connected sum.
    fn reduced(&self) -> (BigInt, BigInt) {
        match self {
            Term::Block(b) => {
                let n = b.numbers();
                (n.e() - 2, n.sigma().clone())
            }
            Term::Seam(g) => (BigInt::from(4 * *g) - 2, BigInt::zero()),
            Term::Cp2 => (BigInt::one(), BigInt::one()),
            Term::Cp2Bar => (BigInt::one(), -BigInt::one()),
            Term::S2xS2 => (BigInt::from(2), BigInt::zero()),
        }
    }

    fn spin(&self) -> bool {
        match self {
            Term::Block(b) => b.spin(),
            Term::S2xS2 | Term::Seam(_) => true,
            Term::Cp2 | Term::Cp2Bar => false,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Block(b) => write!(f, "{b}"),
            Term::Seam(g) => write!(f, "seam(g{g})"),
            Term::Cp2 => write!(f, "CP2"),
            Term::Cp2Bar => write!(f, "CP2bar"),
            Term::S2xS2 => write!(f, "(S2xS2)"),
        }
    }
}

/// `S2xS2` count required to absorb `copies` of an exotic block; the
/// resolving number itself is not known.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PendingCondition {
    pub block: Block,
    #[serde_as(as = "JsonInt")]
    pub copies: BigInt,
    #[serde_as(as = "JsonInt")]
    pub available: BigInt,
}

impl fmt::Display for PendingCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} >= {} * k0({})", self.available, self.copies, self.block)
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct TermCount {
    term: Term,
    #[serde_as(as = "JsonInt")]
    count: BigInt,
}

/// Multiset of summands plus the conditions for complete decomposition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DissolutionExpression {
    #[serde(with = "term_map")]
    terms: BTreeMap<Term, BigInt>,
    pub pending: Vec<PendingCondition>,
}

mod term_map {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(map: &BTreeMap<Term, BigInt>, s: S) -> Result<S::Ok, S::Error> {
        let list: Vec<TermCount> = map.iter().map(|(t, c)| TermCount { term: t.clone(), count: c.clone() }).collect();
        list.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Term, BigInt>, D::Error> {
        let list = Vec::<TermCount>::deserialize(d)?;
        Ok(list.into_iter().map(|tc| (tc.term, tc.count)).collect())
    }
}

impl DissolutionExpression {
    pub fn from_terms(terms: impl IntoIterator<Item = (Term, BigInt)>) -> Self {
        let mut out = DissolutionExpression::default();
        for (t, c) in terms {
            out.add(t, &c);
        }
        out
    }

    pub fn count(&self, term: &Term) -> BigInt {
        self.terms.get(term).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Term, &BigInt)> {
        self.terms.iter()
    }

    fn add(&mut self, term: Term, count: &BigInt) {
        let entry = self.terms.entry(term.clone()).or_default();
        *entry += count;
        assert!(!entry.is_negative(), "negative count for {term}");
        if entry.is_zero() {
            self.terms.remove(&term);
        }
    }

    fn take(&mut self, term: Term, count: &BigInt) {
        self.add(term, &-count);
    }

    /// `(e, sigma)` of the connected sum.
    pub fn e_sigma(&self) -> (BigInt, BigInt) {
        let mut e = BigInt::from(2);
        let mut sigma = BigInt::zero();
        for (t, c) in &self.terms {
            let (re, rs) = t.reduced();
            e += c * re;
            sigma += c * rs;
        }
        (e, sigma)
    }

    pub fn spin(&self) -> bool {
        self.terms.keys().all(Term::spin)
    }

    /// Same summands, ignoring pending conditions.
    pub fn same_terms(&self, other: &DissolutionExpression) -> bool {
        self.terms == other.terms
    }
}

impl fmt::Display for DissolutionExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(t, c)| format!("{c}{t}")).collect();
        write!(f, "{}", parts.join(" # "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Start: the recipe plus one `CP2`.
    Stabilize,
    /// `K3 # j CP2bar` as `E(2) # j CP2bar`.
    K3Elliptic,
    /// `E(n)` as the fiber sum `E(n-1) +_T E(1)`.
    SplitElliptic,
    /// Sum with `E(1)` along a genus-`g` surface, stabilised once, becomes a
    /// connected sum with `(1+2g) CP2 # (8+2g) CP2bar`.
    BlowupSeamRemoval,
    /// Each remaining genus-`g` seam becomes `(2g-1)(CP2 # CP2bar)`.
    IrrationalSum,
    /// `E(m)` in a non-spin sum becomes `(2m-1) CP2 # (10m-1) CP2bar`.
    DissolveElliptic,
    /// `CP2 # CP2bar` becomes `S2xS2` in a non-spin sum.
    PairToS2xS2,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteStep {
    pub rule: Rule,
    pub expression: String,
    #[serde_as(as = "JsonInt")]
    pub e: BigInt,
    #[serde_as(as = "JsonInt")]
    pub sigma: BigInt,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dissolution {
    pub expression: DissolutionExpression,
    pub steps: Vec<RewriteStep>,
    #[serde_as(as = "JsonInt")]
    pub target_e: BigInt,
    #[serde_as(as = "JsonInt")]
    pub target_sigma: BigInt,
}

struct Rewriter {
    expr: DissolutionExpression,
    steps: Vec<RewriteStep>,
    target: (BigInt, BigInt),
}

impl Rewriter {
    fn record(&mut self, rule: Rule) {
        let (e, sigma) = self.expr.e_sigma();
        assert_eq!((&e, &sigma), (&self.target.0, &self.target.1), "{rule:?} broke conservation");
        self.steps.push(RewriteStep { rule, expression: self.expr.to_string(), e, sigma });
    }
}

/// Rewrites `recipe # CP2` into a connected sum of `CP2`, `CP2bar`, `S2xS2`
/// and the exotic blocks `S`, `Y(i)`, asserting conservation of `(e, sigma)`
/// after every step.
pub fn dissolve(recipe: &SumRecipe) -> Result<Dissolution, SymplecticError> {
    recipe.validate()?;
    if recipe.runs.iter().any(|r| matches!(r.block, Block::X { .. })) || !recipe.simply_connected() {
        return Err(SymplecticError::NotSimplyConnected);
    }
    if recipe.parity() == Parity::Spin {
        return Err(SymplecticError::SpinRecipe);
    }
    let has_elliptic = recipe.runs.iter().any(|r| match &r.block {
        Block::Elliptic { n } => n > &BigInt::one(),
        Block::K3BlownUp { .. } => true,
        _ => false,
    });
    if !has_elliptic {
        return Err(SymplecticError::NoEllipticSeam);
    }

    let numbers = sum_invariants(recipe);
    let target = (numbers.e() + 1, numbers.sigma() + 1);
    let mut expr = DissolutionExpression::default();
    for (idx, run) in recipe.runs.iter().enumerate() {
        expr.add(Term::Block(run.block.clone()), &run.count);
        let seams = if idx == 0 { &run.count - 1 } else { run.count.clone() };
        if seams.is_positive() {
            expr.add(Term::Seam(run.seam_genus), &seams);
        }
    }
    expr.add(Term::Cp2Bar, &recipe.blowups);
    expr.add(Term::Cp2, &BigInt::one());
    let mut rw = Rewriter { expr, steps: Vec::new(), target };
    rw.record(Rule::Stabilize);

    let k3s: Vec<(Block, BigInt)> = rw
        .expr
        .terms
        .iter()
        .filter(|(t, _)| matches!(t, Term::Block(Block::K3BlownUp { .. })))
        .map(|(t, c)| match t {
            Term::Block(b) => (b.clone(), c.clone()),
            _ => unreachable!(),
        })
        .collect();
    if !k3s.is_empty() {
        for (block, count) in k3s {
            let Block::K3BlownUp { j } = &block else { unreachable!() };
            rw.expr.take(Term::Block(block.clone()), &count);
            rw.expr.add(Term::Block(Block::elliptic(2)), &count);
            rw.expr.add(Term::Cp2Bar, &(&count * j));
        }
        rw.record(Rule::K3Elliptic);
    }

    let split = rw
        .expr
        .terms
        .keys()
        .filter_map(|t| match t {
            Term::Block(Block::Elliptic { n }) if n > &BigInt::one() => Some(n.clone()),
            _ => None,
        })
        .max()
        .expect("elliptic block checked above");
    rw.expr.take(Term::Block(Block::elliptic(split.clone())), &BigInt::one());
    rw.expr.add(Term::Block(Block::elliptic(&split - 1)), &BigInt::one());
    rw.expr.add(Term::Block(Block::elliptic(1)), &BigInt::one());
    rw.expr.add(Term::Seam(1), &BigInt::one());
    rw.record(Rule::SplitElliptic);

    rw.expr.take(Term::Block(Block::elliptic(1)), &BigInt::one());
    rw.expr.take(Term::Seam(1), &BigInt::one());
    rw.expr.take(Term::Cp2, &BigInt::one());
    rw.expr.add(Term::Cp2, &BigInt::from(3));
    rw.expr.add(Term::Cp2Bar, &BigInt::from(10));
    rw.record(Rule::BlowupSeamRemoval);

    for g in [1u32, 2] {
        let m = rw.expr.count(&Term::Seam(g));
        if m.is_positive() {
            let pairs = &m * (2 * g - 1);
            rw.expr.take(Term::Seam(g), &m);
            rw.expr.add(Term::Cp2, &pairs);
            rw.expr.add(Term::Cp2Bar, &pairs);
            rw.record(Rule::IrrationalSum);
        }
    }

    let elliptic: Vec<(BigInt, BigInt)> = rw
        .expr
        .terms
        .iter()
        .filter_map(|(t, c)| match t {
            Term::Block(Block::Elliptic { n }) => Some((n.clone(), c.clone())),
            _ => None,
        })
        .collect();
    for (n, count) in elliptic {
        rw.expr.take(Term::Block(Block::elliptic(n.clone())), &count);
        rw.expr.add(Term::Cp2, &(&count * (BigInt::from(2) * &n - 1)));
        rw.expr.add(Term::Cp2Bar, &(&count * (BigInt::from(10) * &n - 1)));
        rw.record(Rule::DissolveElliptic);
    }

    let cp2 = rw.expr.count(&Term::Cp2);
    let cp2bar = rw.expr.count(&Term::Cp2Bar);
    let others_spin = rw.expr.terms.keys().filter(|t| !matches!(t, Term::Cp2 | Term::Cp2Bar)).all(Term::spin);
    let mut pairs = cp2.clone().min(cp2bar.clone());
    if others_spin && cp2 == cp2bar {
        pairs -= 1;
    }
    if pairs.is_positive() {
        rw.expr.take(Term::Cp2, &pairs);
        rw.expr.take(Term::Cp2Bar, &pairs);
        rw.expr.add(Term::S2xS2, &pairs);
        rw.record(Rule::PairToS2xS2);
    }

    let available = rw.expr.count(&Term::S2xS2);
    rw.expr.pending = rw
        .expr
        .terms
        .iter()
        .filter_map(|(t, c)| match t {
            Term::Block(b) => {
                Some(PendingCondition { block: b.clone(), copies: c.clone(), available: available.clone() })
            }
            _ => None,
        })
        .collect();
    debug_assert!(!rw.expr.spin());
    Ok(Dissolution { expression: rw.expr, steps: rw.steps, target_e: rw.target.0, target_sigma: rw.target.1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn shape(blocks: &[(Block, i64)], s2: i64, cp2bar: i64) -> DissolutionExpression {
        let mut terms: Vec<(Term, BigInt)> = blocks.iter().map(|(b, c)| (Term::Block(b.clone()), n(*c))).collect();
        terms.push((Term::S2xS2, n(s2)));
        terms.push((Term::Cp2Bar, n(cp2bar)));
        DissolutionExpression::from_terms(terms)
    }

    #[test]
    fn wedge_display() {
        for k in 1..6i64 {
            for r in 0..9i64 {
                for nn in 2..7i64 {
                    let d = dissolve(&SumRecipe::x_krn(k, r, nn).unwrap()).unwrap();
                    let want = shape(&[(Block::S, k + r)], 3 * k + r + 2 * nn - 2, 8 * nn - 1);
                    assert!(d.expression.same_terms(&want), "{} vs {}", d.expression, want);
                    assert_eq!(d.expression.pending.len(), 1);
                }
            }
        }
    }

    #[test]
    fn geo_display() {
        for (i, l, k, r, nn) in [(1u64, 1i64, 1i64, 0i64, 2i64), (3, 2, 4, 5, 6), (11, 3, 1, 8, 3)] {
            let d = dissolve(&SumRecipe::y_lkrn(Some(i), l, k, r, nn).unwrap()).unwrap();
            let want = shape(&[(Block::Y { i }, l), (Block::S, k + r)], l + 3 * k + r + 2 * nn - 2, 8 * nn - 1);
            assert!(d.expression.same_terms(&want), "{}", d.expression);
            assert_eq!(d.expression.pending.len(), 2);
        }
    }

    #[test]
    fn errors() {
        assert_eq!(dissolve(&SumRecipe::single(Block::elliptic(4))).unwrap_err(), SymplecticError::SpinRecipe);
        let no_e = SumRecipe::new(vec![super::super::Run::new(Block::S, 3, 2)]).unwrap();
        assert_eq!(dissolve(&no_e).unwrap_err(), SymplecticError::NoEllipticSeam);
        let x = SumRecipe::new(vec![
            super::super::Run::new(Block::X { i: 1 }, 1, 1),
            super::super::Run::new(Block::elliptic(2), 1, 1),
        ])
        .unwrap();
        assert_eq!(dissolve(&x).unwrap_err(), SymplecticError::NotSimplyConnected);
    }

    #[test]
    fn elliptic_alone() {
        let d = dissolve(&SumRecipe::single(Block::elliptic(3))).unwrap();
        assert!(d.expression.same_terms(&shape(&[], 6, 23)));
        let k3 = SumRecipe::single(Block::K3BlownUp { j: n(2) });
        let d = dissolve(&k3).unwrap();
        assert!(d.expression.same_terms(&shape(&[], 4, 17)));
    }

    #[test]
    fn keeps_non_spin_remainder() {
        let d = dissolve(&SumRecipe::single(Block::elliptic(2)));
        assert!(d.is_err());
        let d = dissolve(&SumRecipe::single(Block::elliptic(2)).with_blowups(1)).unwrap();
        assert!(!d.expression.spin());
    }
}
