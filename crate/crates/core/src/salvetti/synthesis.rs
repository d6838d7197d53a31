use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::represent::{feasibility_window, salvetti_represent_seeded, FeasibilityWindow};
use super::SalvettiError;
use crate::branched_covers::{canonical_divisibility, chern, CoverTower};
use crate::invariants::CharNumbers;
use crate::json::{JsonInt, JsonRational};
use crate::number_theory::{primes_in_window, solve_power_system, Congruence, PrimeWindow};

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum M0Policy {
    Explicit(#[serde_as(as = "JsonInt")] BigInt),
    AutoMinimal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityTarget {
    OddDivisibility,
    EvenDivisibility,
}

fn default_prime_limit() -> u64 {
    10_000_000_000
}

fn default_attempts() -> u32 {
    24
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTupleSpec {
    pub k: usize,
    #[serde_as(as = "Vec<JsonRational>")]
    pub mu: Vec<BigRational>,
    #[serde_as(as = "JsonRational")]
    pub delta: BigRational,
    #[serde_as(as = "JsonRational")]
    pub alpha: BigRational,
    pub m0_policy: M0Policy,
    pub parity_target: ParityTarget,
    #[serde(default = "default_prime_limit")]
    pub prime_search_limit: u64,
    /// Number of `m0` values tried by the auto-minimal policy.
    #[serde(default = "default_attempts")]
    pub max_attempts: u32,
    #[serde(default)]
    pub seed: u64,
}

impl KTupleSpec {
    pub fn new(
        k: usize,
        mu: Vec<BigRational>,
        delta: BigRational,
        alpha: BigRational,
        parity_target: ParityTarget,
    ) -> Self {
        KTupleSpec {
            k,
            mu,
            delta,
            alpha,
            m0_policy: M0Policy::AutoMinimal,
            parity_target,
            prime_search_limit: default_prime_limit(),
            max_attempts: default_attempts(),
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<(), SalvettiError> {
        let bad = |m: String| Err(SalvettiError::InvalidSpec(m));
        if self.k < 2 {
            return bad(format!("k = {} must be at least 2", self.k));
        }
        if self.mu.is_empty() || self.mu.iter().any(|m| !m.is_positive()) {
            return bad("mu must be a non-empty list of positive rationals".into());
        }
        let total: BigRational = self.mu.iter().sum();
        if !total.is_one() {
            return bad(format!("mu sums to {total}, not 1"));
        }
        if !self.delta.is_positive() {
            return bad(format!("delta = {} must be positive", self.delta));
        }
        if self.alpha <= BigRational::one() {
            return bad(format!("alpha = {} must exceed 1", self.alpha));
        }
        if self.max_attempts == 0 {
            return bad("max_attempts must be positive".into());
        }
        Ok(())
    }

    fn denominator_lcm(&self) -> BigInt {
        self.mu.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()))
    }

    /// `(step, offset)`: admissible `m0` are exactly `offset (mod step)`,
    /// positive multiples of every `mu` denominator with the parity that
    /// produces the requested divisibility parity.
    fn m0_lattice(&self) -> Result<(BigInt, BigInt), SalvettiError> {
        let den = self.denominator_lcm();
        match self.parity_target {
            // Divisibility m0 - 3 + (d - 1) A_d is odd iff m0 is even.
            ParityTarget::OddDivisibility => Ok((den.lcm(&BigInt::from(2)), BigInt::zero())),
            ParityTarget::EvenDivisibility => {
                if den.is_even() {
                    return Err(SalvettiError::ParityConflict { denominator: den });
                }
                Ok((BigInt::from(2) * &den, den))
            }
        }
    }
}

/// `sum mu_j^2`.
pub fn mu_squared(mu: &[BigRational]) -> BigRational {
    mu.iter().map(|m| m * m).sum()
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DRecord {
    pub d: u64,
    #[serde_as(as = "JsonInt")]
    pub a: BigInt,
    #[serde_as(as = "JsonInt")]
    pub b: BigInt,
    pub window: FeasibilityWindow,
    #[serde_as(as = "JsonInt")]
    pub divisibility: BigInt,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthesisState {
    pub primes: PrimeWindow,
    #[serde_as(as = "JsonInt")]
    pub p: BigInt,
    pub s: usize,
    #[serde_as(as = "JsonRational")]
    pub epsilon: BigRational,
    #[serde_as(as = "JsonInt")]
    pub m0: BigInt,
    /// `mu^2 m0^2`, an integer because `m0` clears every denominator.
    #[serde_as(as = "JsonInt")]
    pub mu_sq_m0_sq: BigInt,
    #[serde_as(as = "JsonInt")]
    pub c: BigInt,
    #[serde_as(as = "JsonInt")]
    pub c_prime: BigInt,
    pub c_class: Congruence,
    pub c_prime_class: Congruence,
    pub records: Vec<DRecord>,
    /// `floor(A_{d*}^2 / 240) - kappa'` for the smallest prime `d*`.
    #[serde_as(as = "JsonInt")]
    pub delta_window: BigInt,
    pub attempts: u32,
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTupleResult {
    pub towers: Vec<CoverTower>,
    pub shared: CharNumbers,
    #[serde_as(as = "Vec<JsonInt>")]
    pub divisibilities: Vec<BigInt>,
    #[serde_as(as = "JsonRational")]
    pub achieved_sigma_ratio: BigRational,
    #[serde_as(as = "JsonRational")]
    pub mu_sq: BigRational,
    pub state: SynthesisState,
}

pub fn synthesize(spec: &KTupleSpec) -> Result<KTupleResult, SalvettiError> {
    spec.validate()?;
    let (step, offset) = spec.m0_lattice()?;
    let primes = primes_in_window(spec.k, &spec.alpha, spec.prime_search_limit)?;
    let setup = Setup::new(spec, primes)?;
    let admissible_at_least = |floor: &BigInt| {
        let floor = floor.max(&step);
        floor + (&offset - floor).mod_floor(&step)
    };
    let (mut m0, attempts) = match &spec.m0_policy {
        M0Policy::Explicit(m0) => {
            if !m0.is_positive() || (m0 - &offset).mod_floor(&step) != BigInt::zero() {
                return Err(SalvettiError::InvalidSpec(format!(
                    "m0 = {m0} must be a positive integer congruent to {offset} mod {step}"
                )));
            }
            (m0.clone(), 1)
        }
        M0Policy::AutoMinimal => (admissible_at_least(&setup.m0_lower_bound()), spec.max_attempts),
    };
    let mut attempt = 1;
    loop {
        match setup.attempt(&m0) {
            Ok(mut state) => {
                state.attempts = attempt;
                return setup.finish(state);
            }
            Err(e @ SalvettiError::WindowFailure { .. }) if attempt >= attempts => return Err(e),
            Err(SalvettiError::WindowFailure { .. }) => {
                m0 = admissible_at_least(&(BigInt::from(2) * &m0));
                attempt += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Everything that does not depend on `m0`.
struct Setup<'a> {
    spec: &'a KTupleSpec,
    primes: PrimeWindow,
    p: BigInt,
    d_star: u64,
    epsilon: BigRational,
    /// `(P/d)^8` and `(P/d)^16` per prime.
    powers: Vec<(u64, BigInt, BigInt)>,
    c_modulus: BigInt,
    c_prime_modulus: BigInt,
}

impl<'a> Setup<'a> {
    fn new(spec: &'a KTupleSpec, primes: PrimeWindow) -> Result<Self, SalvettiError> {
        let p = primes.product();
        let d_star = primes.smallest();
        let epsilon = &spec.delta / BigRational::from_integer(BigInt::from(d_star - 1));
        let powers = primes
            .primes
            .iter()
            .map(|&d| {
                let cof = &p / BigInt::from(d);
                let p8 = num_traits::pow(cof, 8);
                let p16 = &p8 * &p8;
                (d, p8, p16)
            })
            .collect();
        let c_modulus = primes.primes.iter().fold(BigInt::one(), |acc, &d| acc.lcm(&lifted_c(d)));
        let c_prime_modulus = primes.primes.iter().fold(BigInt::one(), |acc, &d| acc.lcm(&lifted_c_prime(d)));
        Ok(Setup { spec, primes, p, d_star, epsilon, powers, c_modulus, c_prime_modulus })
    }

    fn star(&self) -> &(u64, BigInt, BigInt) {
        self.powers.iter().find(|(d, _, _)| *d == self.d_star).expect("d* is in the window")
    }

    /// Smallest `m0` for which the rounding granularities of `A_{d*}` and
    /// `B_{d*}` are small against `A_{d*} ≈ epsilon m0` and the window
    /// width `A_{d*}^2 / 240`.
    fn m0_lower_bound(&self) -> BigInt {
        let (d, p8, p16) = self.star();
        let d = BigInt::from(*d);
        let grain_a: BigInt = p8 * &self.c_modulus / (&d - 1) + 1;
        let grain_b: BigInt = p16 * &self.c_prime_modulus / (&d * &d - 1) + 1;
        let need_b: BigInt = Roots::sqrt(&(BigInt::from(1440) * grain_b + 960)) + 1;
        let need_a = BigInt::from(50) * grain_a;
        let a_target = BigRational::from_integer(need_a.max(need_b));
        (a_target / &self.epsilon).ceil().to_integer()
    }

    fn attempt(&self, m0: &BigInt) -> Result<SynthesisState, SalvettiError> {
        let fail =
            |d: u64, detail: String, margin: BigInt| SalvettiError::WindowFailure { m0: m0.clone(), d, detail, margin };
        let m0_rat = BigRational::from_integer(m0.clone());
        let mu_sq_m0_sq_rat = mu_squared(&self.spec.mu) * &m0_rat * &m0_rat;
        if !mu_sq_m0_sq_rat.is_integer() {
            return Err(SalvettiError::InvalidSpec(format!("mu^2 m0^2 is not an integer for m0 = {m0}")));
        }
        let mu_sq_m0_sq = mu_sq_m0_sq_rat.to_integer();
        let q = BigInt::from(3) * &mu_sq_m0_sq - 3;
        let shift = m0 - 3;

        // C: (P/d)^8 C ≡ m0 - 3 (mod 2(d - 1)) makes every A_d an even integer.
        let c_class = solve_power_system(&self.primes, 8, lifted_c, &shift)?;
        let (_, p8_star, _) = self.star();
        let c_target = (m0_rat * (BigRational::one() + &self.spec.delta) - BigRational::from_integer(3.into()))
            / BigRational::from_integer(p8_star.clone());
        let mut c = c_class.nearest(&c_target.round().to_integer());
        if !c.is_positive() {
            c = c_class.at_least(&BigInt::one());
        }

        let mut rows = Vec::with_capacity(self.powers.len());
        for (d, p8, p16) in &self.powers {
            let divisibility = p8 * &c;
            let (a, rem) = (&divisibility - &shift).div_rem(&BigInt::from(d - 1));
            debug_assert!(rem.is_zero() && a.is_even());
            let window = feasibility_window(&a);
            if window.is_empty() {
                return Err(fail(*d, format!("A_d = {a} has an empty window"), a));
            }
            rows.push((*d, p16, a, window, divisibility));
        }

        // C': (P/d)^16 C' ≡ Q (mod 2(d^2 - 1)) makes every B_d an even integer;
        // B_d in [lo_d, hi_d] is an interval condition on C'.
        let c_prime_class = solve_power_system(&self.primes, 16, lifted_c_prime, &q)?;
        let mut lower: Option<(BigInt, u64)> = None;
        let mut upper: Option<(BigInt, u64)> = None;
        for (d, p16, _, window, _) in &rows {
            let dd = BigInt::from(d * d - 1);
            let lo = (&q + &dd * &window.b_min).div_ceil(p16);
            let hi = (&q + &dd * &window.b_max).div_floor(p16);
            if lower.as_ref().is_none_or(|(v, _)| &lo > v) {
                lower = Some((lo, *d));
            }
            if upper.as_ref().is_none_or(|(v, _)| &hi < v) {
                upper = Some((hi, *d));
            }
        }
        let ((lo, lo_d), (hi, hi_d)) = (lower.unwrap(), upper.unwrap());
        if lo > hi {
            return Err(fail(hi_d, format!("B windows do not overlap (binding prime {lo_d})"), &hi - &lo));
        }

        let star_row = rows.iter().find(|r| r.0 == self.d_star).unwrap();
        let a_star = &star_row.2;
        let a_sq = BigRational::from_integer(a_star * a_star);
        let kappa_prime = BigRational::from_integer(star_row.3.kappa_prime.clone());
        let delta_rat = &a_sq / BigRational::from_integer(240.into()) - &kappa_prime;
        let b_target = &a_sq / BigRational::from_integer(16.into()) + &delta_rat / BigRational::from_integer(2.into());
        let dd_star = BigRational::from_integer(BigInt::from(self.d_star * self.d_star - 1));
        let c_prime_target =
            (BigRational::from_integer(q.clone()) + dd_star * b_target) / BigRational::from_integer(star_row.1.clone());
        let clamped = c_prime_target.round().to_integer().clamp(lo.clone(), hi.clone());
        let mut c_prime = c_prime_class.nearest(&clamped);
        if c_prime < lo {
            c_prime += &c_prime_class.modulus;
        }
        if c_prime > hi {
            return Err(fail(
                hi_d,
                "no admissible C' in the common B window".into(),
                &hi - &lo - &c_prime_class.modulus,
            ));
        }

        let mut records = Vec::with_capacity(rows.len());
        for (d, p16, a, window, divisibility) in rows {
            let (b, rem) = (p16 * &c_prime - &q).div_rem(&BigInt::from(d * d - 1));
            if !rem.is_zero() || !window.contains(&b) {
                return Err(SalvettiError::Verification(format!("B_{d} = {b} escaped its window")));
            }
            records.push(DRecord { d, a, b, window, divisibility });
        }

        Ok(SynthesisState {
            primes: self.primes.clone(),
            p: self.p.clone(),
            s: self.spec.mu.len(),
            epsilon: self.epsilon.clone(),
            m0: m0.clone(),
            mu_sq_m0_sq,
            c,
            c_prime,
            c_class,
            c_prime_class,
            records,
            delta_window: delta_rat.floor().to_integer(),
            attempts: 0,
        })
    }

    fn finish(&self, state: SynthesisState) -> Result<KTupleResult, SalvettiError> {
        let m0 = BigRational::from_integer(state.m0.clone());
        let head: Vec<(u64, BigInt)> = self.spec.mu.iter().map(|m| (2, (m * &m0).to_integer())).collect();
        let seed = self.spec.seed;
        let solutions = state
            .records
            .par_iter()
            .map(|r| salvetti_represent_seeded(&r.a, &r.b, seed ^ r.d))
            .collect::<Result<Vec<_>, _>>()?;
        let towers = state
            .records
            .iter()
            .zip(solutions)
            .map(|(r, xs)| {
                let mut stages = head.clone();
                stages.extend(xs.into_iter().map(|x| (r.d, x)));
                CoverTower::new(stages)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let shared = chern(&towers[0])?;
        let divisibilities = towers.iter().map(canonical_divisibility).collect::<Result<Vec<_>, _>>()?;
        let result = KTupleResult {
            achieved_sigma_ratio: BigRational::new(-shared.sigma().clone(), shared.c1sq().clone()),
            mu_sq: mu_squared(&self.spec.mu),
            shared,
            divisibilities,
            towers,
            state,
        };
        verify_result(&result, self.spec.parity_target)?;
        Ok(result)
    }
}

fn lifted_c(d: u64) -> BigInt {
    BigInt::from(2 * (d - 1))
}

fn lifted_c_prime(d: u64) -> BigInt {
    BigInt::from(2 * (d * d - 1))
}

/// Recomputes every tower independently and checks the claims of a result.
pub fn verify_result(result: &KTupleResult, parity: ParityTarget) -> Result<(), SalvettiError> {
    let bad = |m: String| Err(SalvettiError::Verification(m));
    let state = &result.state;
    for (i, tower) in result.towers.iter().enumerate() {
        let cn = chern(tower)?;
        if cn != result.shared {
            return bad(format!("tower {i} has {cn}, expected {}", result.shared));
        }
        let div = canonical_divisibility(tower)?;
        if div != result.divisibilities[i] || div != state.records[i].divisibility {
            return bad(format!("tower {i} divisibility {div} disagrees with the record"));
        }
        let odd = div.is_odd();
        if odd != (parity == ParityTarget::OddDivisibility) {
            return bad(format!("tower {i} divisibility {div} has the wrong parity"));
        }
    }
    for (i, a) in result.divisibilities.iter().enumerate() {
        if result.divisibilities[i + 1..].contains(a) {
            return bad(format!("divisibility {a} repeats"));
        }
    }
    let scale = BigInt::from(2).pow(state.s as u32) * num_traits::pow(state.p.clone(), 16);
    let c1sq = &scale * &state.c * &state.c;
    let (sigma, rem) = (-(&scale * &state.c_prime)).div_rem(&BigInt::from(3));
    if &c1sq != result.shared.c1sq() || !rem.is_zero() || &sigma != result.shared.sigma() {
        return bad("closed forms 2^s P^16 C^2 and -2^s P^16 C'/3 disagree with the towers".into());
    }
    for r in &state.records {
        if r.a.is_odd() || r.b.is_odd() {
            return bad(format!("A_{} or B_{} is odd", r.d, r.d));
        }
    }
    Ok(())
}

#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeReport {
    /// `c1^2 / chi`.
    #[serde_as(as = "JsonRational")]
    pub slope: BigRational,
    /// `-sigma / c1^2`.
    #[serde_as(as = "JsonRational")]
    pub sigma_ratio: BigRational,
    #[serde_as(as = "JsonRational")]
    pub mu_sq: BigRational,
    /// `|sigma_ratio - mu^2|`.
    #[serde_as(as = "JsonRational")]
    pub distance: BigRational,
    /// `distance / mu^2`.
    #[serde_as(as = "JsonRational")]
    pub relative_error: BigRational,
}

pub fn slope_report(result: &KTupleResult) -> SlopeReport {
    let shared = &result.shared;
    let slope = BigRational::new(shared.c1sq().clone(), shared.chi().clone());
    let sigma_ratio = result.achieved_sigma_ratio.clone();
    let distance = (&sigma_ratio - &result.mu_sq).abs();
    SlopeReport { relative_error: &distance / &result.mu_sq, slope, sigma_ratio, mu_sq: result.mu_sq.clone(), distance }
}
