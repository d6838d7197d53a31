use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::{blowup_obstruction_with, Assumption, RuleCheck, Status, Verdict, VerdictError, VerdictLedger};
use crate::branched_covers::einstein_flag;
use crate::invariants::{hitchin_thorpe, homeo_type, CharNumbers, HitchinThorpe, HomeoType, Parity};
use crate::json::{JsonInt, JsonRational};
use crate::salvetti::{mu_squared, synthesize, verify_result, KTupleResult, KTupleSpec, ParityTarget};
use crate::symplectic::{infinite_family, plan_point, sum_invariants, RegionConfig, SumRecipe};

/// Limits of the non-Einstein side search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    /// Consecutive values of `c1^2(N)` tried above the threshold.
    pub candidates: u32,
    /// Blown-up recipes to collect.
    pub entries: usize,
    /// Logarithmic-transform multiplicities attached to each recipe.
    pub multiplicities: Vec<u64>,
    /// Require `3b > c1^2` instead of `3b >= c1^2`.
    pub strict: bool,
    pub region: RegionConfig,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            candidates: 64,
            entries: 2,
            multiplicities: vec![2, 3, 5, 7],
            strict: false,
            region: RegionConfig::default(),
        }
    }
}

/// Minimal recipe `N` blown up `b` times, plus its logarithmic-transform
/// family.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct XEntry {
    pub recipe: SumRecipe,
    pub minimal: CharNumbers,
    #[serde_as(as = "JsonInt")]
    pub blowups: BigInt,
    pub family: Vec<SumRecipe>,
    pub verdict: Verdict,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainTheoremReport {
    pub k: usize,
    pub spec: KTupleSpec,
    pub z: KTupleResult,
    pub z_verdicts: Vec<Verdict>,
    pub x_entries: Vec<XEntry>,
    pub shared_homeo: HomeoType,
    #[serde_as(as = "JsonRational")]
    pub slope: BigRational,
    pub hitchin_thorpe: HitchinThorpe,
    pub ledger: VerdictLedger,
}

impl MainTheoremReport {
    /// Re-checks every claim of the report from its stored data.
    pub fn verify(&self) -> Result<(), VerdictError> {
        let mismatch = |m: String| Err(VerdictError::HomeoMismatch(m));
        verify_result(&self.z, ParityTarget::OddDivisibility)?;
        let shared = &self.z.shared;
        if homeo_type(shared, Parity::NonSpin)? != self.shared_homeo {
            return mismatch("Z side".into());
        }
        for v in self.z_verdicts.iter().chain(self.x_entries.iter().map(|x| &x.verdict)) {
            if !v.replay() {
                return Err(VerdictError::Malformed(format!("verdict {v:?} does not replay")));
            }
        }
        for x in &self.x_entries {
            let cn = sum_invariants(&x.recipe);
            if &cn != shared || x.recipe.parity() != Parity::NonSpin || !x.recipe.simply_connected() {
                return mismatch(format!("{} has {cn}", x.recipe));
            }
            if x.blowups != x.minimal.c1sq() - shared.c1sq() || x.blowups != x.recipe.blowups {
                return Err(VerdictError::Malformed(format!("{}: b is not c1^2(N) - c1^2(Z)", x.recipe)));
            }
            for member in &x.family {
                if &sum_invariants(member) != shared {
                    return mismatch(format!("family member {member}"));
                }
            }
        }
        Ok(())
    }
}

/// `c1^2 / chi` of the covers tends to `8 / (1 + mu^2)`.
pub fn predicted_slope(mu: &[BigRational]) -> BigRational {
    BigRational::from_integer(BigInt::from(8)) / (BigRational::one() + mu_squared(mu))
}

fn slope_error(slope: &BigRational, reason: &str) -> VerdictError {
    VerdictError::SlopeOutOfRange { slope: slope.to_string(), reason: reason.into() }
}

/// `k` homeomorphic covers with Kähler–Einstein metrics, matched by blown-up
/// symplectic sums that carry none.
pub fn assemble_main_theorem(
    k: usize,
    spec: &KTupleSpec,
    bounds: &SearchBounds,
) -> Result<MainTheoremReport, VerdictError> {
    if spec.k != k {
        return Err(VerdictError::Malformed(format!("k = {k} but the spec asks for {}", spec.k)));
    }
    if spec.parity_target != ParityTarget::OddDivisibility {
        return Err(VerdictError::Malformed("the blown-up side is non-spin, so divisibilities must be odd".into()));
    }
    let six = BigRational::from_integer(BigInt::from(6));
    let predicted = predicted_slope(&spec.mu);
    if predicted >= six {
        return Err(slope_error(&predicted, "limiting slope 8/(1 + mu^2) is not below 6"));
    }

    let z = synthesize(spec)?;
    verify_result(&z, spec.parity_target)?;
    let shared = z.shared.clone();
    let slope = shared.slope().expect("covers have chi > 0");
    if slope >= six {
        return Err(slope_error(&slope, "achieved slope is not below 6"));
    }
    let shared_homeo = homeo_type(&shared, Parity::NonSpin)?;
    let mut ledger = VerdictLedger::new();

    let mut z_verdicts = Vec::with_capacity(z.towers.len());
    for (tower, div) in z.towers.iter().zip(&z.divisibilities) {
        let verdict = einstein_flag(tower);
        if verdict.status != Status::KeExists {
            return Err(VerdictError::Malformed(format!("tower with divisibility {div} is not of general type")));
        }
        ledger.record(format!("cover:{}", serde_json::to_string(tower).expect("tower serialises")), verdict.status)?;
        z_verdicts.push(verdict);
    }

    let threshold = (BigInt::from(3) * shared.c1sq()).div_ceil(&BigInt::from(2));
    let mut x_entries = Vec::new();
    let mut failures = Vec::new();
    let mut c_n = threshold;
    for _ in 0..bounds.candidates {
        if x_entries.len() >= bounds.entries {
            break;
        }
        match plan_point(shared.chi(), &c_n, &bounds.region) {
            Ok(minimal) => x_entries.push(x_entry(minimal, &shared, &shared_homeo, bounds)?),
            Err(e) => failures.push(e.to_string()),
        }
        c_n += 1;
    }
    if x_entries.is_empty() {
        return Err(VerdictError::NoMatch(failures.into_iter().next().unwrap_or_else(|| "no candidates".into())));
    }
    for x in &x_entries {
        for member in &x.family {
            ledger.record(format!("sum:{member}"), x.verdict.status)?;
        }
    }

    let report = MainTheoremReport {
        k,
        spec: spec.clone(),
        z,
        z_verdicts,
        x_entries,
        shared_homeo,
        slope,
        hitchin_thorpe: hitchin_thorpe(&shared),
        ledger,
    };
    report.verify()?;
    Ok(report)
}

fn x_entry(
    minimal: SumRecipe,
    shared: &CharNumbers,
    shared_homeo: &HomeoType,
    bounds: &SearchBounds,
) -> Result<XEntry, VerdictError> {
    let minimal_numbers = sum_invariants(&minimal);
    let blowups = minimal_numbers.c1sq() - shared.c1sq();
    debug_assert!(!blowups.is_negative() && minimal.minimal());
    let recipe = minimal.with_blowups(blowups.clone());
    let homeo = homeo_type(&sum_invariants(&recipe), recipe.parity())?;
    if &homeo != shared_homeo {
        return Err(VerdictError::HomeoMismatch(format!("{recipe}: {homeo} vs {shared_homeo}")));
    }
    let check = RuleCheck::BlowupThreshold {
        minimal_c1sq: minimal_numbers.c1sq().clone(),
        blowups: blowups.clone(),
        strict: bounds.strict,
    };
    let status = if blowup_obstruction_with(minimal_numbers.c1sq(), &blowups, bounds.strict) {
        Status::Obstructed
    } else {
        Status::Unknown
    };
    let mut verdict = Verdict::new(
        status,
        vec![check],
        vec![Assumption::MinimalSymplectic, Assumption::SwNontrivial, Assumption::DistinctSmoothStructures],
    );
    verdict.acd = recipe.acd();
    let family = infinite_family(&recipe, &bounds.multiplicities)?;
    Ok(XEntry { recipe, minimal: minimal_numbers, blowups, family, verdict })
}
