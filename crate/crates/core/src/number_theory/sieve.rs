use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::NumberTheoryError;
use crate::json::JsonRational;

const SEGMENT_LEN: u64 = 1 << 18;

/// Plain sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Ascending iterator over the primes in `[start, limit]`, sieved one
/// segment at a time so that memory stays bounded for large starts.
pub struct SegmentedSieve {
    base: Vec<u64>,
    next_low: u64,
    limit: u64,
    buffer: Vec<u64>,
    cursor: usize,
}

impl SegmentedSieve {
    pub fn new(start: u64, limit: u64) -> Self {
        let root = (limit as f64).sqrt() as u64 + 2;
        SegmentedSieve { base: primes_up_to(root), next_low: start.max(2), limit, buffer: Vec::new(), cursor: 0 }
    }

    fn fill(&mut self) -> bool {
        while self.next_low <= self.limit {
            let low = self.next_low;
            let high = low.saturating_add(SEGMENT_LEN - 1).min(self.limit);
            self.next_low = high.saturating_add(1);
            let mut composite = vec![false; (high - low + 1) as usize];
            for &p in &self.base {
                let square = p * p;
                if square > high {
                    break;
                }
                let first = square.max(low.div_ceil(p) * p);
                let mut m = first;
                while m <= high {
                    composite[(m - low) as usize] = true;
                    m += p;
                }
            }
            self.buffer.clear();
            self.cursor = 0;
            self.buffer.extend(
                composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| low + i as u64).filter(|&v| v >= 2),
            );
            if !self.buffer.is_empty() {
                return true;
            }
            if high == u64::MAX {
                break;
            }
        }
        false
    }
}

impl Iterator for SegmentedSieve {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.cursor >= self.buffer.len() && !self.fill() {
            return None;
        }
        let p = self.buffer[self.cursor];
        self.cursor += 1;
        Some(p)
    }
}

/// A set of `k` odd primes, all within a multiplicative factor `alpha` of one
/// another in the sense `(d + 1) < alpha (d' - 1)` for every ordered pair of
/// distinct members.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeWindow {
    pub primes: Vec<u64>,
    #[serde_as(as = "JsonRational")]
    pub alpha: BigRational,
}

impl PrimeWindow {
    pub fn new(primes: Vec<u64>, alpha: BigRational) -> Result<Self, NumberTheoryError> {
        let window = PrimeWindow { primes, alpha };
        window.validate()?;
        Ok(window)
    }

    pub fn validate(&self) -> Result<(), NumberTheoryError> {
        if self.primes.is_empty() {
            return Err(NumberTheoryError::InvalidArgument("empty prime window".into()));
        }
        let mut sorted = self.primes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.primes.len() {
            return Err(NumberTheoryError::InvalidArgument("repeated prime in window".into()));
        }
        for &d in &self.primes {
            if d < 3 || !super::is_probable_prime(&BigInt::from(d), &mut rand_chacha_for(d)) {
                return Err(NumberTheoryError::InvalidArgument(format!("{d} is not an odd prime")));
            }
        }
        for &d in &self.primes {
            for &d2 in &self.primes {
                if d != d2 && !pair_within(d, d2, &self.alpha) {
                    return Err(NumberTheoryError::InvalidArgument(format!(
                        "({d} + 1) < alpha ({d2} - 1) fails for alpha = {}",
                        self.alpha
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn smallest(&self) -> u64 {
        *self.primes.iter().min().expect("non-empty window")
    }

    /// `P`, the product of the primes.
    pub fn product(&self) -> BigInt {
        self.primes.iter().map(|&d| BigInt::from(d)).product()
    }
}

fn rand_chacha_for(d: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(d)
}

/// Exact cross-multiplied test of `(d + 1) < alpha (d' - 1)`.
fn pair_within(d: u64, d_prime: u64, alpha: &BigRational) -> bool {
    BigInt::from(d + 1) * alpha.denom() < alpha.numer() * BigInt::from(d_prime - 1)
}

/// Smallest set of `k` odd primes (smallest maximal element) forming a
/// [`PrimeWindow`] for `alpha`, scanning ascending up to `search_limit`.
///
/// For a fixed maximum the tightest candidate is the run of `k` consecutive
/// primes ending there, so only those runs are tested.
pub fn primes_in_window(k: usize, alpha: &BigRational, search_limit: u64) -> Result<PrimeWindow, NumberTheoryError> {
    if k == 0 {
        return Err(NumberTheoryError::InvalidArgument("k must be positive".into()));
    }
    if *alpha <= BigRational::one() {
        return Err(NumberTheoryError::InvalidArgument(format!("alpha = {alpha} must exceed 1")));
    }
    // With k >= 2 the smallest member q and some q' >= q + 2 must satisfy
    // q + 3 < alpha (q - 1), i.e. q > (alpha + 3) / (alpha - 1).
    let start = if k == 1 {
        3
    } else {
        let bound = (alpha + BigRational::from_integer(3.into())) / (alpha - BigRational::one());
        bound.floor().to_integer().to_u64().unwrap_or(u64::MAX).max(3)
    };
    let mut run: VecDeque<u64> = VecDeque::with_capacity(k);
    for p in SegmentedSieve::new(start, search_limit) {
        if p == 2 {
            continue;
        }
        if run.len() == k {
            run.pop_front();
        }
        run.push_back(p);
        if run.len() == k && (k == 1 || pair_within(p, run[0], alpha)) {
            return PrimeWindow::new(run.into_iter().collect(), alpha.clone());
        }
    }
    Err(NumberTheoryError::Exhausted { k, limit: search_limit })
}
