use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::{blowup_obstruction, connected_sum_obstruction, Assumption, RuleCheck, Status, Verdict};
use crate::invariants::{CharNumbers, Parity};
use crate::json::JsonInt;
use crate::symplectic::{plan_point, sum_invariants, Block, RegionConfig, SumRecipe};

/// Values of `c1^2` tried for the symplectic summand.
const CANDIDATES: u32 = 256;

/// `summand # copies K3 # blowups (-CP2)`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqWitness {
    pub summand: SumRecipe,
    pub k3_copies: u32,
    #[serde_as(as = "JsonInt")]
    pub blowups: BigInt,
}

impl PqWitness {
    /// `(b+, b-, parity)` of the connected sum.
    pub fn homeo(&self) -> (BigInt, BigInt, Parity) {
        let n = sum_invariants(&self.summand);
        let copies = BigInt::from(self.k3_copies);
        let b_plus = n.b_plus() + &copies * 3;
        let b_minus = n.b_minus() + &copies * 19 + &self.blowups;
        let parity = if self.blowups.is_zero() && self.summand.parity() == Parity::Spin {
            Parity::Spin
        } else {
            Parity::NonSpin
        };
        (b_plus, b_minus, parity)
    }
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PqReport {
    #[serde_as(as = "JsonInt")]
    pub p: BigInt,
    #[serde_as(as = "JsonInt")]
    pub q: BigInt,
    pub verdict: Verdict,
    pub witness: Option<PqWitness>,
}

/// Looks for a smooth structure on `p CP2 # q (-CP2)` without Einstein
/// metrics, built from a minimal symplectic summand, `K3` copies and
/// blowups. Never claims an obstruction without an explicit witness.
pub fn pq_structures(p: &BigInt, q: &BigInt) -> PqReport {
    let report = |verdict, witness| PqReport { p: p.clone(), q: q.clone(), verdict, witness };
    if !p.is_positive() || q.is_negative() {
        return report(Verdict::unknown("needs p >= 1 and q >= 0"), None);
    }
    let (k3_copies, offset) = match p.mod_floor(&BigInt::from(8)).to_u32().expect("residue mod 8") {
        r if r % 2 == 1 => (0u32, 0i64),
        2 | 6 => (1, 3),
        4 => (3, 9),
        _ => return report(Verdict::unknown("p = 0 mod 8 is outside the construction"), None),
    };
    let summand_bplus = p - offset;
    if summand_bplus < BigInt::from(3) {
        return report(Verdict::unknown(format!("summand would need b+ = {summand_bplus} < 3")), None);
    }
    let chi = (&summand_bplus + 1) / 2;
    // b- of the sum is base_minus - y + blowups, with y = c1^2 of the summand.
    let base_minus = BigInt::from(10) * &chi - 1 + BigInt::from(19 * k3_copies);
    let slack = q - &base_minus;
    // blowups = slack + y; the threshold 3 blowups >= y - offset bounds y below.
    let threshold_offset = BigInt::from(match k3_copies {
        0 => 0,
        1 => 12,
        _ => 36,
    });
    let lower = [
        BigInt::from(if k3_copies == 0 { 1 } else { 0 }),
        -&slack,
        Integer::div_ceil(&(BigInt::from(-3) * &slack - &threshold_offset), &BigInt::from(2)),
    ]
    .into_iter()
    .max()
    .expect("non-empty");

    let region = RegionConfig::default();
    let mut y = lower;
    let mut last_reason = String::from("no candidate tried");
    for _ in 0..CANDIDATES {
        let summand = match plan_point(&chi, &y, &region) {
            Ok(r) => Some(r),
            Err(e) => {
                last_reason = e.to_string();
                (chi == BigInt::from(2) && y == BigInt::from(1)).then(|| SumRecipe::single(Block::S))
            }
        };
        if let Some(summand) = summand {
            let witness = PqWitness { summand, k3_copies, blowups: &slack + &y };
            if let Some(verdict) = judge(&witness, p, q) {
                return report(verdict, Some(witness));
            }
            last_reason = format!("witness {} fails the threshold", witness.summand);
        }
        y += 1;
    }
    report(Verdict::unknown(format!("no witness found: {last_reason}")), None)
}

fn judge(w: &PqWitness, p: &BigInt, q: &BigInt) -> Option<Verdict> {
    let (b_plus, b_minus, parity) = w.homeo();
    if &b_plus != p || &b_minus != q || parity != Parity::NonSpin || !w.summand.simply_connected() {
        return None;
    }
    let n: CharNumbers = sum_invariants(&w.summand);
    let assumptions =
        vec![Assumption::MinimalSymplectic, Assumption::SwNontrivial, Assumption::DistinctSmoothStructures];
    let check = if w.k3_copies == 0 {
        if !blowup_obstruction(n.c1sq(), &w.blowups) {
            return None;
        }
        RuleCheck::BlowupThreshold { minimal_c1sq: n.c1sq().clone(), blowups: w.blowups.clone(), strict: false }
    } else {
        let copies = w.k3_copies as usize;
        let mut c1sqs = vec![n.c1sq().clone()];
        c1sqs.extend(std::iter::repeat_n(BigInt::zero(), copies));
        let mut b_plus = vec![n.b_plus()];
        b_plus.extend(std::iter::repeat_n(BigInt::from(3), copies));
        if !connected_sum_obstruction(&c1sqs, &b_plus, &w.blowups).ok()? {
            return None;
        }
        RuleCheck::ConnectedSum { c1sqs, b_plus, blowups: w.blowups.clone() }
    };
    let mut assumptions = assumptions;
    if w.k3_copies > 0 {
        assumptions.push(Assumption::BplusCongruence);
    }
    let verdict = Verdict::new(Status::Obstructed, vec![check], assumptions);
    verdict.replay().then_some(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn examples() {
        assert_eq!(pq_structures(&n(8), &n(1000)).verdict.status, Status::Unknown);
        let r = pq_structures(&n(3), &n(1000));
        assert_eq!(r.verdict.status, Status::Obstructed);
        assert!(r.witness.is_some());
        assert_eq!(pq_structures(&n(2), &n(3)).verdict.status, Status::Unknown);
    }

    #[test]
    fn every_obstruction_has_a_matching_witness() {
        for p in 1..60i64 {
            for q in [0i64, 10, 50, 130, 400] {
                let r = pq_structures(&n(p), &n(q));
                match r.verdict.status {
                    Status::Obstructed => {
                        let w = r.witness.as_ref().unwrap();
                        let (bp, bm, parity) = w.homeo();
                        assert_eq!((bp, bm, parity), (n(p), n(q), Parity::NonSpin));
                        assert!(r.verdict.replay());
                    }
                    _ => assert!(r.witness.is_none()),
                }
                if p % 8 == 0 {
                    assert_eq!(r.verdict.status, Status::Unknown);
                }
            }
        }
    }

    #[test]
    fn large_q_is_obstructed_off_multiples_of_eight() {
        for p in [3i64, 6, 7, 10, 12, 17, 20, 27] {
            let r = pq_structures(&n(p), &n(40 * p + 200));
            assert_eq!(r.verdict.status, Status::Obstructed, "p = {p}: {:?}", r.verdict);
        }
    }
}
