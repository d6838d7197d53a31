use std::collections::BTreeSet;

use geography_core::number_theory::{four_square, FourSquare};
use geography_core::salvetti::{feasibility_window, salvetti_represent, PARTS};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn brute_force_squares(n: u64) -> bool {
    let r = (n as f64).sqrt() as u64 + 1;
    for a in 0..=r {
        for b in 0..=a {
            for c in 0..=b {
                let s = a * a + b * b + c * c;
                if s > n {
                    break;
                }
                let d = ((n - s) as f64).sqrt() as u64;
                if (d.saturating_sub(1)..=d + 1).any(|d| d <= c && s + d * d == n) {
                    return true;
                }
            }
        }
    }
    false
}

fn check_four(n: u64, out: &[BigInt; 4]) {
    let total: BigInt = out.iter().map(|x| x * x).sum();
    assert_eq!(total, BigInt::from(n));
    assert!(out.windows(2).all(|w| w[0] >= w[1]) && out.iter().all(|x| !x.is_negative()));
}

#[test]
fn four_square_agrees_with_brute_force_to_ten_thousand() {
    let randomized = FourSquare { brute_force_limit: 0 };
    for n in 0..=10_000u64 {
        assert!(brute_force_squares(n), "brute force found no representation of {n}");
        check_four(n, &four_square(&BigInt::from(n), n));
        check_four(n, &randomized.decompose(&BigInt::from(n), n ^ 0x5eed));
    }
}

/// Every `sum x^2` reachable by 16 positive integers summing to `a`, by
/// enumerating non-increasing sequences.
fn reachable(a: u64) -> BTreeSet<u64> {
    fn walk(left: u64, parts: usize, cap: u64, sq: u64, out: &mut BTreeSet<u64>) {
        if parts == 0 {
            if left == 0 {
                out.insert(sq);
            }
            return;
        }
        let p = parts as u64;
        if left < p {
            return;
        }
        let lo = left.div_ceil(p);
        let hi = cap.min(left - (p - 1));
        for x in lo..=hi {
            walk(left - x, parts - 1, x, sq + x * x, out);
        }
    }
    let mut out = BTreeSet::new();
    walk(a, PARTS, a, 0, &mut out);
    out
}

#[test]
fn represent_matches_enumeration_for_even_a_to_forty() {
    for a in (16..=40u64).step_by(2) {
        let solvable = reachable(a);
        let window = feasibility_window(&BigInt::from(a));
        let top = (a - 15) * (a - 15) + 15;
        for b in (a..=top + 2).step_by(2) {
            let got = salvetti_represent(&BigInt::from(a), &BigInt::from(b));
            match got {
                Ok(xs) => {
                    assert!(solvable.contains(&b), "A={a} B={b} claimed but not reachable");
                    assert_eq!(xs.len(), PARTS);
                    assert!(xs.iter().all(|x| x.is_positive()));
                    assert_eq!(xs.iter().sum::<BigInt>(), BigInt::from(a));
                    assert_eq!(xs.iter().map(|x| x * x).sum::<BigInt>(), BigInt::from(b));
                }
                Err(_) => assert!(!solvable.contains(&b), "A={a} B={b} reachable but rejected"),
            }
            if window.contains(&BigInt::from(b)) {
                assert!(solvable.contains(&b), "window claims unreachable B={b} for A={a}");
            }
        }
        if a >= 32 {
            assert!(!window.is_empty(), "A={a} has an empty window");
        }
    }
}

#[test]
fn represent_rejects_below_sixteen_and_odd_mismatch() {
    assert!(salvetti_represent(&BigInt::from(14), &BigInt::from(14)).is_err());
    assert!(salvetti_represent(&BigInt::from(16), &BigInt::from(17)).is_err());
}

proptest! {
    #[test]
    fn windows_above_the_exhaustive_range_are_constructive(a in 96u64..5000, t in 0u64..1000, seed in any::<u64>()) {
        let a = BigInt::from(a);
        let w = feasibility_window(&a);
        prop_assume!(!w.is_empty());
        let span: BigInt = &w.b_max - &w.b_min;
        let b: BigInt = &w.b_min + (BigInt::from(t) * &span) / 1000;
        let b = if w.contains(&b) { b } else { b + 1 };
        prop_assume!(w.contains(&b));
        let xs = geography_core::salvetti::salvetti_represent_seeded(&a, &b, seed).unwrap();
        prop_assert_eq!(xs.iter().sum::<BigInt>(), a.clone());
        prop_assert_eq!(xs.iter().map(|x| x * x).sum::<BigInt>(), b);
        prop_assert!(xs.iter().all(|x| x.is_positive()));
    }
}
