use std::time::Instant;

use geography_core::branched_covers::CoverTower;
use geography_core::invariants::{hitchin_thorpe, HitchinThorpe};
use geography_core::salvetti::{synthesize, verify_result, KTupleSpec, ParityTarget};
use geography_core::symplectic::sum_invariants;
use geography_core::verdicts::{assemble_main_theorem, SearchBounds, Status, VerdictError};
use geography_core::CharNumbers;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn alpha() -> BigRational {
    q(100_000_001, 100_000_000)
}

/// Stage-by-stage re-evaluation: `c1^2 = prod d (sum (d-1)m - 3)^2` and
/// `sigma = -prod d (sum (d^2-1) m^2 - 3) / 3`, with `chi` from Noether.
fn recompute(tower: &CoverTower) -> (BigInt, BigInt, BigInt) {
    let mut prod = BigInt::one();
    let mut k = BigInt::from(-3);
    let mut s = BigInt::from(-3);
    for (d, m) in tower.stages() {
        let d = BigInt::from(*d);
        prod *= &d;
        k += (&d - 1) * m;
        s += (&d * &d - 1) * m * m;
    }
    let c1sq = &prod * &k * &k;
    let (sigma, rem) = (-(&prod * &s)).div_rem(&BigInt::from(3));
    assert!(rem.is_zero());
    let e = (&c1sq - BigInt::from(3) * &sigma) / 2;
    let chi = (&c1sq + &e) / 12;
    (chi, c1sq, sigma)
}

#[test]
fn two_towers_for_mu_one_third() {
    let start = Instant::now();
    let spec = KTupleSpec::new(2, vec![q(1, 3); 3], q(1, 50), alpha(), ParityTarget::OddDivisibility);
    let result = synthesize(&spec).unwrap();
    verify_result(&result, ParityTarget::OddDivisibility).unwrap();
    assert_eq!(result.towers.len(), 2);
    let a = recompute(&result.towers[0]);
    let b = recompute(&result.towers[1]);
    assert_eq!(a, b);
    assert_eq!((&a.0, &a.1, &a.2), (result.shared.chi(), result.shared.c1sq(), result.shared.sigma()));
    let d: Vec<u64> = result.state.primes.primes.clone();
    let (x, y) = (&result.divisibilities[0], &result.divisibilities[1]);
    assert_ne!(x, y);
    assert!(x.is_odd() && y.is_odd());
    let lhs = x * num_traits::pow(BigInt::from(d[0]), 8);
    let rhs = y * num_traits::pow(BigInt::from(d[1]), 8);
    assert_eq!(lhs, rhs, "divisibilities scale as (d2/d1)^8");
    let ratio = BigRational::new(-a.2.clone(), a.1.clone());
    let rel = ((&ratio - q(1, 3)) / q(1, 3)).abs();
    assert!(rel < q(1, 10), "ratio {}", ratio.to_f64().unwrap());
    assert!(start.elapsed().as_secs() < 60);
}

#[test]
fn main_theorem_instance() {
    let spec = KTupleSpec::new(2, vec![q(1, 2); 2], q(1, 50), alpha(), ParityTarget::OddDivisibility);
    let report = assemble_main_theorem(2, &spec, &SearchBounds::default()).unwrap();
    report.verify().unwrap();
    assert!(report.slope < q(6, 1));
    assert_eq!(report.z_verdicts.len(), 2);
    assert!(report.z_verdicts.iter().all(|v| v.status == Status::KeExists && v.replay()));
    assert!(!report.x_entries.is_empty());
    for x in &report.x_entries {
        assert_eq!(x.verdict.status, Status::Obstructed);
        assert!(x.verdict.replay());
        assert_eq!(&x.blowups, &(x.minimal.c1sq() - report.z.shared.c1sq()));
        assert_eq!(sum_invariants(&x.recipe), report.z.shared);
        let tags: std::collections::BTreeSet<_> = x.family.iter().map(|m| m.log_transforms.clone()).collect();
        assert_eq!(tags.len(), x.family.len());
    }
    assert_eq!(hitchin_thorpe(&report.z.shared), HitchinThorpe::Strict);

    let json = serde_json::to_string(&report).unwrap();
    let back: geography_core::verdicts::MainTheoremReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}

#[test]
fn steep_target_is_out_of_range() {
    let spec = KTupleSpec::new(2, vec![q(1, 100); 100], q(1, 50), alpha(), ParityTarget::OddDivisibility);
    let err = assemble_main_theorem(2, &spec, &SearchBounds::default()).unwrap_err();
    assert!(matches!(err, VerdictError::SlopeOutOfRange { .. }), "{err}");
}

#[test]
fn shared_numbers_satisfy_noether() {
    let spec = KTupleSpec::new(2, vec![q(1, 2); 2], q(1, 50), alpha(), ParityTarget::OddDivisibility);
    let r = synthesize(&spec).unwrap();
    let cn = CharNumbers::from_chi_c1sq(r.shared.chi().clone(), r.shared.c1sq().clone());
    assert_eq!(cn, r.shared);
    assert!(r.shared.sigma().is_negative());
}
