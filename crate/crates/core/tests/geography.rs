use std::time::Instant;

use geography_core::symplectic::{
    dissolve, fold_copywise, plan_point, region_membership, sum_invariants, Block, RegionConfig, RegionTag, Run,
    SumRecipe,
};
use geography_core::{CharNumbers, Parity};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn wedge_scan_has_no_failures() {
    let start = Instant::now();
    let cfg = RegionConfig::default();
    let mut points = 0;
    for chi in 1..=200i64 {
        for y in 0..=(3 * chi - 51) {
            let (x, yy) = (BigInt::from(chi), BigInt::from(y));
            let recipe = plan_point(&x, &yy, &cfg).unwrap_or_else(|e| panic!("({chi}, {y}): {e}"));
            let want = CharNumbers::from_chi_c1sq(chi, y);
            assert_eq!(fold_copywise(&recipe, 10_000).unwrap(), want, "({chi}, {y}) via {recipe}");
            assert!(recipe.minimal() && recipe.simply_connected());
            assert!(region_membership(&x, &yy, &cfg).contains(&RegionTag::Wedge));
            points += 1;
        }
    }
    assert_eq!(points, (17..=200).map(|c| 3 * c - 50).sum::<i64>());
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn planner_covers_points_above_the_wedge() {
    let cfg = RegionConfig::default();
    for chi in [3000i64, 5000, 12000] {
        for y in [3 * chi, 5 * chi, 6 * chi, 7 * chi, 8 * chi] {
            let (x, yy) = (BigInt::from(chi), BigInt::from(y));
            if region_membership(&x, &yy, &cfg).contains(&RegionTag::Geo) {
                let r = plan_point(&x, &yy, &cfg).unwrap();
                assert_eq!(sum_invariants(&r), CharNumbers::from_chi_c1sq(chi, y));
            }
        }
    }
}

fn random_recipe(rng: &mut ChaCha8Rng) -> SumRecipe {
    loop {
        let mut runs = Vec::new();
        if rng.gen_bool(0.7) {
            runs.push(Run::new(Block::S, rng.gen_range(1..6), 2));
        }
        if rng.gen_bool(0.4) {
            runs.push(Run::new(Block::Y { i: rng.gen_range(1..13) }, rng.gen_range(1..4), 1));
        }
        if rng.gen_bool(0.5) {
            runs.push(Run::new(Block::S, rng.gen_range(1..9), 1));
        }
        if rng.gen_bool(0.2) {
            runs.push(Run::new(Block::K3BlownUp { j: rng.gen_range(0..4).into() }, 1, 1));
        }
        runs.push(Run::new(Block::elliptic(rng.gen_range(2..30)), 1, 1));
        let blowups: i64 = if rng.gen_bool(0.3) { rng.gen_range(1..20) } else { 0 };
        if let Ok(r) = SumRecipe::new(runs) {
            let r = r.with_blowups(blowups);
            if r.parity() == Parity::NonSpin {
                return r;
            }
        }
    }
}

#[test]
fn dissolution_conserves_on_random_recipes() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..100 {
        let recipe = random_recipe(&mut rng);
        let d = dissolve(&recipe).unwrap_or_else(|e| panic!("{recipe}: {e}"));
        let n = sum_invariants(&recipe);
        assert_eq!((&d.target_e, &d.target_sigma), (&(n.e() + 1), &(n.sigma() + 1)));
        assert!(d.steps.len() >= 4);
        for step in &d.steps {
            assert_eq!((&step.e, &step.sigma), (&d.target_e, &d.target_sigma), "{recipe}: {:?}", step.rule);
        }
        assert_eq!(d.expression.e_sigma(), (d.target_e.clone(), d.target_sigma.clone()));
        assert!(!d.expression.spin());
    }
}

proptest! {
    #[test]
    fn plan_then_sum_is_identity(chi in 1i64..4000, frac in 0u32..=100) {
        let cfg = RegionConfig::default();
        let y = (3 * chi - 51).max(0) * frac as i64 / 100;
        let (x, yy) = (BigInt::from(chi), BigInt::from(y));
        if let Ok(r) = plan_point(&x, &yy, &cfg) {
            prop_assert_eq!(sum_invariants(&r), CharNumbers::from_chi_c1sq(chi, y));
        } else {
            prop_assert!(chi < 17);
        }
    }

    #[test]
    fn dissolution_is_conservative(k in 1i64..40, r in 0i64..9, n in 2i64..60, blowups in 0i64..30) {
        let recipe = SumRecipe::x_krn(k, r, n).unwrap().with_blowups(blowups);
        let d = dissolve(&recipe).unwrap();
        prop_assert_eq!(d.expression.e_sigma(), (d.target_e.clone(), d.target_sigma.clone()));
    }
}
