use geography_core::branched_covers::{canonical_divisibility, chern, einstein_flag, CoverTower};
use geography_core::invariants::{hitchin_thorpe, homeo_type};
use geography_core::projective::{canonical_vector, catalog_lookup, ci_invariants, MultidegreeCI};
use geography_core::regression::published_examples;
use geography_core::salvetti::{slope_report, synthesize, verify_result, KTupleSpec, M0Policy};
use geography_core::symplectic::{dissolve, plan_point, region_membership, sum_invariants, RegionTag};
use geography_core::verdicts::{assemble_main_theorem, pq_structures, SearchBounds, Status};
use geography_core::{CharNumbers, Error};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{CiArgs, Command, MapArgs, MatchArgs, PlanArgs, SynthArgs, TowerArgs};

pub struct Outcome {
    pub result: Value,
    /// False when the command ran but its own checks failed.
    pub success: bool,
}

fn value<T: Serialize>(x: &T) -> Result<Value, Error> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

fn ok(result: Value) -> Result<Outcome, Error> {
    Ok(Outcome { result, success: true })
}

pub fn execute(command: &Command, seed: u64) -> Result<Outcome, Error> {
    match command {
        Command::Tower(a) => tower(a),
        Command::Synth(a) => synth(a, seed),
        Command::Plan(a) => plan(a),
        Command::Dissolve(a) => dissolution(a),
        Command::Ci(a) => ci(a),
        Command::Match(a) => main_theorem(a, seed),
        Command::Pq(a) => ok(value(&pq_structures(&a.p, &a.q))?),
        Command::Examples => examples(),
        Command::Map(_) | Command::Replay(_) => Err(Error::Internal(format!("{} has no JSON report", command.name()))),
    }
}

fn numbers_json(n: &CharNumbers) -> Result<Value, Error> {
    Ok(json!({
        "numbers": value(n)?,
        "b_plus": n.b_plus().to_string(),
        "b_minus": n.b_minus().to_string(),
        "hitchin_thorpe": value(&hitchin_thorpe(n))?,
    }))
}

fn tower(a: &TowerArgs) -> Result<Outcome, Error> {
    let tower = CoverTower::new(a.stages.iter().map(|s| (s.d, s.m.clone())).collect())?;
    let numbers = chern(&tower)?;
    let divisibility = canonical_divisibility(&tower).ok();
    let homeo = homeo_type(&numbers, tower.parity()).ok();
    ok(json!({
        "tower": value(&tower)?,
        "invariants": numbers_json(&numbers)?,
        "canonical_multiple": tower.canonical_multiple().to_string(),
        "divisibility": divisibility.map(|d| d.to_string()),
        "parity": value(&tower.parity())?,
        "homeo": value(&homeo)?,
        "verdict": value(&einstein_flag(&tower))?,
    }))
}

fn spec(a: &SynthArgs, seed: u64) -> KTupleSpec {
    let mut spec = KTupleSpec::new(a.k, a.mu.clone(), a.delta.clone(), a.alpha.clone(), a.parity.into());
    if let Some(m0) = &a.m0 {
        spec.m0_policy = M0Policy::Explicit(m0.clone());
    }
    spec.max_attempts = a.max_attempts;
    spec.prime_search_limit = a.prime_limit;
    spec.seed = seed;
    spec
}

fn synth(a: &SynthArgs, seed: u64) -> Result<Outcome, Error> {
    let spec = spec(a, seed);
    let result = synthesize(&spec)?;
    verify_result(&result, spec.parity_target)?;
    ok(json!({
        "spec": value(&spec)?,
        "slope": value(&slope_report(&result))?,
        "synthesis": value(&result)?,
    }))
}

fn tags(chi: &BigInt, c1sq: &BigInt, a: &PlanArgs) -> Vec<&'static str> {
    region_membership(chi, c1sq, &a.region.config()).into_iter().map(RegionTag::name).collect()
}

fn plan(a: &PlanArgs) -> Result<Outcome, Error> {
    let recipe = plan_point(&a.chi, &a.c1sq, &a.region.config())?;
    let numbers = sum_invariants(&recipe);
    ok(json!({
        "tags": tags(&a.chi, &a.c1sq, a),
        "recipe": value(&recipe)?,
        "display": recipe.to_string(),
        "invariants": numbers_json(&numbers)?,
        "parity": value(&recipe.parity())?,
        "minimal": recipe.minimal(),
        "simply_connected": recipe.simply_connected(),
    }))
}

fn dissolution(a: &PlanArgs) -> Result<Outcome, Error> {
    let recipe = plan_point(&a.chi, &a.c1sq, &a.region.config())?;
    let d = dissolve(&recipe)?;
    ok(json!({
        "recipe": recipe.to_string(),
        "expression": d.expression.to_string(),
        "dissolution": value(&d)?,
    }))
}

fn ci(a: &CiArgs) -> Result<Outcome, Error> {
    if let Some(name) = &a.entry {
        let entry = catalog_lookup(name)?;
        return ok(json!({
            "entry": value(&entry)?,
            "invariants": numbers_json(&entry.numbers)?,
        }));
    }
    let x = MultidegreeCI::new(a.ambient.clone(), a.degrees.iter().map(|d| d.0.clone()).collect())?;
    let inv = ci_invariants(&x)?;
    let canonical = canonical_vector(&x)?;
    let homeo = homeo_type(&inv.numbers, canonical.parity).ok();
    ok(json!({
        "ci": value(&x)?,
        "invariants": numbers_json(&inv.numbers)?,
        "negative_euler": inv.negative_euler,
        "canonical": value(&canonical)?,
        "homeo": value(&homeo)?,
    }))
}

fn main_theorem(a: &MatchArgs, seed: u64) -> Result<Outcome, Error> {
    let spec = spec(&a.synth, seed);
    let bounds = SearchBounds {
        candidates: a.candidates,
        entries: a.entries,
        multiplicities: a.multiplicities.clone(),
        strict: a.strict,
        region: a.region.config(),
    };
    let report = assemble_main_theorem(a.synth.k, &spec, &bounds)?;
    report.verify()?;
    let towers = report.z_verdicts.iter().filter(|v| v.status == Status::KeExists).count();
    let obstructed = report.x_entries.iter().filter(|x| x.verdict.status == Status::Obstructed).count();
    let replays = report.z_verdicts.iter().chain(report.x_entries.iter().map(|x| &x.verdict)).all(|v| v.replay());
    ok(json!({
        "summary": {
            "ke_towers": towers,
            "obstructed_entries": obstructed,
            "rule_chains_replay": replays,
            "homeo": value(&report.shared_homeo)?,
            "hitchin_thorpe": value(&report.hitchin_thorpe)?,
        },
        "report": value(&report)?,
    }))
}

fn examples() -> Result<Outcome, Error> {
    let outcomes = published_examples();
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    Ok(Outcome {
        result: json!({
            "passed": outcomes.len() - failed,
            "failed": failed,
            "outcomes": value(&outcomes)?,
        }),
        success: failed == 0,
    })
}

/// Rows `chi, c1sq, e, sigma, tags, recipe` for `chi_min <= chi <= chi_max`
/// and `0 <= c1sq <= 9 chi`; unreachable points have an empty recipe.
pub fn map_csv(a: &MapArgs) -> Result<String, Error> {
    if a.chi_min > a.chi_max {
        return Err(Error::Malformed(format!("chi-min {} exceeds chi-max {}", a.chi_min, a.chi_max)));
    }
    let cfg = a.region.config();
    cfg.validate()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Internal(e.to_string());
    w.write_record(["chi", "c1sq", "e", "sigma", "tags", "recipe"]).map_err(csv_err)?;
    for chi in a.chi_min..=a.chi_max {
        let x = BigInt::from(chi);
        for y in 0..=9 * chi {
            let y = BigInt::from(y);
            let n = CharNumbers::from_chi_c1sq(x.clone(), y.clone());
            let tags: Vec<&str> = region_membership(&x, &y, &cfg).into_iter().map(RegionTag::name).collect();
            let recipe = plan_point(&x, &y, &cfg).map(|r| r.to_string()).unwrap_or_default();
            w.write_record([
                x.to_string(),
                y.to_string(),
                n.e().to_string(),
                n.sigma().to_string(),
                tags.join(";"),
                recipe,
            ])
            .map_err(csv_err)?;
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::Internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}
