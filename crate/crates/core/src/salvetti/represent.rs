//! Sixteen positive integers with prescribed sum `A` and sum of squares `B`.
//!
//! For `A >= EXHAUSTIVE_LIMIT` the values are built as eight near-equal
//! pairs `(c + t, c - t)`: start from the most even distribution of `A`
//! (which minimises the sum of squares), then spread four pairs by
//! `t_1..t_4` with `t_1^2 + ... + t_4^2 = (B - B_min) / 2`. The values stay
//! positive while that target is at most `(q - 1)^2`, `q = floor(A / 16)`.
//! Below the limit a reachability table over all 16-part compositions is
//! used instead, which is exact.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::SalvettiError;
use crate::json::JsonInt;
use crate::number_theory::FourSquare;

pub const PARTS: usize = 16;

/// Values of `A` below this use the exact reachability table.
pub const EXHAUSTIVE_LIMIT: u64 = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindowMethod {
    Exhaustive,
    Constructive,
}

/// Every `B` with `B ≡ A (mod 2)` and `b_min <= B <= b_max` is representable.
/// `b_min <= A^2/16 + kappa A + kappa_prime` whenever the window is non-empty.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeasibilityWindow {
    #[serde_as(as = "JsonInt")]
    pub a: BigInt,
    #[serde_as(as = "JsonInt")]
    pub b_min: BigInt,
    #[serde_as(as = "JsonInt")]
    pub b_max: BigInt,
    #[serde_as(as = "JsonInt")]
    pub kappa: BigInt,
    #[serde_as(as = "JsonInt")]
    pub kappa_prime: BigInt,
    pub method: WindowMethod,
}

impl FeasibilityWindow {
    pub fn is_empty(&self) -> bool {
        self.b_min > self.b_max
    }

    pub fn contains(&self, b: &BigInt) -> bool {
        b >= &self.b_min && b <= &self.b_max && (b - &self.a).is_even()
    }
}

/// Smallest possible sum of squares: `r` parts `q + 1` and `16 - r` parts `q`.
fn even_split(a: &BigInt) -> (BigInt, usize, BigInt) {
    let (q, r) = a.div_rem(&BigInt::from(PARTS));
    let r = r.to_usize().expect("remainder below 16");
    let base = BigInt::from(PARTS) * &q * &q + BigInt::from(r) * (BigInt::from(2) * &q + 1);
    (q, r, base)
}

pub fn feasibility_window(a: &BigInt) -> FeasibilityWindow {
    let b_max_nominal: BigInt = a * a / 15;
    let empty = |method| FeasibilityWindow {
        a: a.clone(),
        b_min: &b_max_nominal + 1,
        b_max: b_max_nominal.clone(),
        kappa: BigInt::zero(),
        kappa_prime: BigInt::zero(),
        method,
    };
    if a < &BigInt::from(PARTS) {
        return empty(WindowMethod::Exhaustive);
    }
    if let Some(small) = a.to_u64().filter(|&v| v < EXHAUSTIVE_LIMIT) {
        let table = reach_table();
        let mut top = b_max_nominal.to_u64().unwrap();
        if (top + small) % 2 == 1 {
            top -= 1;
        }
        let mut low = top;
        while low >= 2 && table.reachable(PARTS, small, low - 2) {
            low -= 2;
        }
        if !table.reachable(PARTS, small, top) {
            return empty(WindowMethod::Exhaustive);
        }
        let excess = BigInt::from(16 * low) - a * a;
        let kappa_prime = if excess.is_positive() { excess.div_ceil(&BigInt::from(16)) } else { BigInt::zero() };
        return FeasibilityWindow {
            a: a.clone(),
            b_min: low.into(),
            b_max: top.into(),
            kappa: BigInt::zero(),
            kappa_prime,
            method: WindowMethod::Exhaustive,
        };
    }
    let (q, _, base) = even_split(a);
    let reach = &base + BigInt::from(2) * (&q - 1) * (&q - 1);
    FeasibilityWindow {
        a: a.clone(),
        b_min: base,
        b_max: b_max_nominal.min(reach),
        kappa: BigInt::zero(),
        kappa_prime: BigInt::from(4),
        method: WindowMethod::Constructive,
    }
}

/// [`salvetti_represent_seeded`] with seed 0.
pub fn salvetti_represent(a: &BigInt, b: &BigInt) -> Result<Vec<BigInt>, SalvettiError> {
    salvetti_represent_seeded(a, b, 0)
}

/// Sixteen positive integers, sorted descending, with sum `a` and sum of
/// squares `b`. Small `a` accept every representable `b`; large `a` require
/// `b` inside [`feasibility_window`].
pub fn salvetti_represent_seeded(a: &BigInt, b: &BigInt, seed: u64) -> Result<Vec<BigInt>, SalvettiError> {
    if !a.is_positive() {
        return Err(SalvettiError::NonPositive { a: a.clone() });
    }
    if !(a - b).is_even() {
        return Err(SalvettiError::ParityMismatch { a: a.clone(), b: b.clone() });
    }
    let out_of_window =
        || SalvettiError::OutOfWindow { a: a.clone(), b: b.clone(), window: Box::new(feasibility_window(a)) };
    let values = if let Some(small) = a.to_u64().filter(|&v| v < EXHAUSTIVE_LIMIT) {
        let b_small = b.to_u64().filter(|&v| v <= small * small).ok_or_else(out_of_window)?;
        reach_table().reconstruct(small, b_small).ok_or_else(out_of_window)?.into_iter().map(BigInt::from).collect()
    } else {
        if !feasibility_window(a).contains(b) {
            return Err(out_of_window());
        }
        constructive(a, b, seed)
    };
    verify(a, b, &values)?;
    Ok(values)
}

fn constructive(a: &BigInt, b: &BigInt, seed: u64) -> Vec<BigInt> {
    let (q, r, base) = even_split(a);
    let target = (b - &base) / 2;
    let t = FourSquare::default().decompose(&target, seed);
    // Values sorted descending: r copies of q + 1, then q. Pairs are formed
    // from adjacent equal values, largest first.
    let mut values: Vec<BigInt> = (0..PARTS).map(|i| if i < r { &q + 1 } else { q.clone() }).collect();
    let mut pairs = Vec::new();
    let mut i = 0;
    while i + 1 < PARTS && pairs.len() < 4 {
        if values[i] == values[i + 1] {
            pairs.push(i);
            i += 2;
        } else {
            i += 1;
        }
    }
    for (slot, t) in pairs.into_iter().zip(t.iter()) {
        values[slot] += t;
        values[slot + 1] -= t;
    }
    values.sort_by(|x, y| y.cmp(x));
    values
}

fn verify(a: &BigInt, b: &BigInt, values: &[BigInt]) -> Result<(), SalvettiError> {
    let sum: BigInt = values.iter().sum();
    let squares: BigInt = values.iter().map(|v| v * v).sum();
    if values.len() != PARTS || values.iter().any(|v| !v.is_positive()) || &sum != a || &squares != b {
        return Err(SalvettiError::Verification(format!("representation of ({a}, {b}) failed its exact check")));
    }
    Ok(())
}

/// `reach[c][s]` is the set of sums of squares of `c` positive integers
/// with sum `s`, as a bitset, for `s < EXHAUSTIVE_LIMIT`.
struct ReachTable {
    words: usize,
    bits: Vec<Vec<Vec<u64>>>,
}

fn reach_table() -> &'static ReachTable {
    static TABLE: OnceLock<ReachTable> = OnceLock::new();
    TABLE.get_or_init(ReachTable::build)
}

impl ReachTable {
    fn build() -> Self {
        let max_sum = EXHAUSTIVE_LIMIT as usize - 1;
        let max_b = max_sum * max_sum;
        let words = max_b / 64 + 1;
        let mut bits = vec![vec![vec![0u64; words]; max_sum + 1]; PARTS + 1];
        bits[0][0][0] = 1;
        for c in 0..PARTS {
            for s in 0..=max_sum {
                if bits[c][s].iter().all(|&w| w == 0) {
                    continue;
                }
                let src = bits[c][s].clone();
                for v in 1..=(max_sum - s) {
                    shift_or(&mut bits[c + 1][s + v], &src, v * v);
                }
            }
        }
        ReachTable { words, bits }
    }

    fn reachable(&self, count: usize, sum: u64, b: u64) -> bool {
        let (s, b) = (sum as usize, b as usize);
        s < self.bits[count].len() && b / 64 < self.words && self.bits[count][s][b / 64] >> (b % 64) & 1 == 1
    }

    fn reconstruct(&self, a: u64, b: u64) -> Option<Vec<u64>> {
        if !self.reachable(PARTS, a, b) {
            return None;
        }
        let (mut s, mut rest) = (a, b);
        let mut out = Vec::with_capacity(PARTS);
        for c in (1..=PARTS).rev() {
            let v = (1..=s).rev().find(|&v| v * v <= rest && self.reachable(c - 1, s - v, rest - v * v))?;
            out.push(v);
            s -= v;
            rest -= v * v;
        }
        out.sort_unstable_by(|x, y| y.cmp(x));
        Some(out)
    }
}

fn shift_or(dst: &mut [u64], src: &[u64], shift: usize) {
    let (word, bit) = (shift / 64, shift % 64);
    for i in (word..dst.len()).rev() {
        let j = i - word;
        let mut v = src[j] << bit;
        if bit != 0 && j > 0 {
            v |= src[j - 1] >> (64 - bit);
        }
        dst[i] |= v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn examples() {
        assert_eq!(salvetti_represent(&n(16), &n(16)).unwrap(), vec![n(1); 16]);
        let mut expected = vec![n(2), n(2)];
        expected.extend(std::iter::repeat_n(n(1), 14));
        assert_eq!(salvetti_represent(&n(18), &n(22)).unwrap(), expected);
        let v = salvetti_represent(&n(32), &n(68)).unwrap();
        assert_eq!(v.iter().sum::<BigInt>(), n(32));
        assert_eq!(v.iter().map(|x| x * x).sum::<BigInt>(), n(68));
    }

    #[test]
    fn errors() {
        assert!(matches!(salvetti_represent(&n(18), &n(21)), Err(SalvettiError::ParityMismatch { .. })));
        assert!(matches!(salvetti_represent(&n(32), &n(62)), Err(SalvettiError::OutOfWindow { .. })));
        assert!(matches!(salvetti_represent(&n(0), &n(0)), Err(SalvettiError::NonPositive { .. })));
        let a = n(1000);
        let over = feasibility_window(&a).b_max + 2;
        assert!(matches!(salvetti_represent(&a, &over), Err(SalvettiError::OutOfWindow { .. })));
    }

    #[test]
    fn window_examples() {
        let w = feasibility_window(&n(32));
        assert_eq!((w.b_min.clone(), w.b_max.clone()), (n(64), n(68)));
        assert!(w.contains(&n(66)) && w.contains(&n(68)));
        let w = feasibility_window(&n(16));
        assert!(w.contains(&n(16)));
        assert_eq!(w.b_max, n(16));
        let a = n(2_000_000_000);
        let w = feasibility_window(&a);
        assert_eq!(w.b_max, &a * &a / 15);
        assert_eq!(w.method, WindowMethod::Constructive);
        assert!(feasibility_window(&n(10)).is_empty());
    }

    #[test]
    fn constructive_window_reaches_nominal_top_from_the_limit() {
        for a in EXHAUSTIVE_LIMIT..20_000 {
            let a = BigInt::from(a);
            let w = feasibility_window(&a);
            assert_eq!(w.b_max, &a * &a / 15, "A = {a}");
            assert!(BigInt::from(16) * &w.b_min <= &a * &a + BigInt::from(64));
        }
    }

    #[test]
    fn constructive_outputs_are_exact() {
        for a in [96i64, 97, 100, 255, 1001, 4096] {
            let a = n(a);
            let w = feasibility_window(&a);
            let mut b = w.b_min.clone();
            while b <= w.b_max {
                let v = salvetti_represent_seeded(&a, &b, 3).unwrap();
                assert_eq!(v.len(), 16);
                b += 2;
            }
        }
    }

    #[test]
    fn huge_values() {
        let a: BigInt = num_traits::pow(n(10), 78) * 7 + 2;
        let w = feasibility_window(&a);
        let b: BigInt = (&w.b_min + &w.b_max) / 2;
        let b: BigInt = if (&b - &a).is_even() { b } else { b + 1 };
        let v = salvetti_represent_seeded(&a, &b, 1).unwrap();
        assert!(v.iter().all(|x| x.is_positive()));
    }
}
