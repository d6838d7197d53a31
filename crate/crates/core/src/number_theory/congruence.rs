use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use super::{NumberTheoryError, PrimeWindow};
use crate::json::JsonInt;

/// `x ≡ residue (mod modulus)` with `0 <= residue < modulus`.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    #[serde_as(as = "JsonInt")]
    pub residue: BigInt,
    #[serde_as(as = "JsonInt")]
    pub modulus: BigInt,
}

impl Congruence {
    pub fn new(residue: impl Into<BigInt>, modulus: impl Into<BigInt>) -> Result<Self, NumberTheoryError> {
        let modulus = modulus.into();
        if !modulus.is_positive() {
            return Err(NumberTheoryError::InvalidArgument(format!("modulus {modulus} must be positive")));
        }
        let residue = residue.into().mod_floor(&modulus);
        Ok(Congruence { residue, modulus })
    }

    pub fn holds_for(&self, x: &BigInt) -> bool {
        x.mod_floor(&self.modulus) == self.residue
    }

    /// Smallest member of the class that is `>= floor`.
    pub fn at_least(&self, floor: &BigInt) -> BigInt {
        floor + (&self.residue - floor).mod_floor(&self.modulus)
    }

    /// Member of the class nearest to `target` (ties go down).
    pub fn nearest(&self, target: &BigInt) -> BigInt {
        let below = target - (target - &self.residue).mod_floor(&self.modulus);
        let above = &below + &self.modulus;
        if (target - &below) <= (&above - target) {
            below
        } else {
            above
        }
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if !m.is_positive() {
        return None;
    }
    let egcd = a.mod_floor(m).extended_gcd(m);
    egcd.gcd.is_one().then(|| egcd.x.mod_floor(m))
}

/// Solves `a x ≡ b (mod m)`; the solution set is one class modulo `m / gcd(a, m)`.
pub fn solve_linear(a: &BigInt, b: &BigInt, m: &BigInt) -> Result<Congruence, NumberTheoryError> {
    if !m.is_positive() {
        return Err(NumberTheoryError::InvalidArgument(format!("modulus {m} must be positive")));
    }
    let g = a.gcd(m);
    if g.is_zero() || !b.is_multiple_of(&g) {
        return Err(NumberTheoryError::Inconsistent(format!("{a} x ≡ {b} (mod {m}) has no solution")));
    }
    let reduced = m / &g;
    let inverse = mod_inverse(&(a / &g), &reduced).expect("a/g is a unit modulo m/g");
    Congruence::new((b / &g) * inverse, reduced)
}

/// Chinese remaindering for pairwise coprime moduli.
pub fn crt_solve(congruences: &[Congruence]) -> Result<Congruence, NumberTheoryError> {
    for (i, a) in congruences.iter().enumerate() {
        for b in &congruences[i + 1..] {
            if !a.modulus.gcd(&b.modulus).is_one() {
                return Err(NumberTheoryError::NonCoprimeModuli(a.modulus.clone(), b.modulus.clone()));
            }
        }
    }
    crt_solve_general(congruences)
}

/// Chinese remaindering for arbitrary moduli: residues must agree modulo
/// every pairwise gcd, and the result is a class modulo the lcm.
pub fn crt_solve_general(congruences: &[Congruence]) -> Result<Congruence, NumberTheoryError> {
    let mut acc = Congruence::new(0, 1)?;
    for c in congruences {
        let g = acc.modulus.gcd(&c.modulus);
        let diff = &c.residue - &acc.residue;
        if !diff.is_multiple_of(&g) {
            return Err(NumberTheoryError::Inconsistent(format!(
                "{} mod {} conflicts with {} mod {}",
                acc.residue, acc.modulus, c.residue, c.modulus
            )));
        }
        // acc.residue + acc.modulus * t ≡ c.residue (mod c.modulus)
        let step = solve_linear(&acc.modulus, &diff, &c.modulus)?;
        let lcm = &acc.modulus / &g * &c.modulus;
        acc = Congruence::new(&acc.residue + &acc.modulus * step.residue, lcm)?;
    }
    Ok(acc)
}

/// Solves `(P/d)^exponent · x ≡ target (mod modulus(d))` simultaneously for
/// every `d` in the window, where `P` is the product of the window.
pub fn solve_power_system(
    window: &PrimeWindow,
    exponent: u32,
    modulus: impl Fn(u64) -> BigInt,
    target: &BigInt,
) -> Result<Congruence, NumberTheoryError> {
    let product = window.product();
    let parts = window
        .primes
        .iter()
        .map(|&d| {
            let m = modulus(d);
            let cofactor = (&product / BigInt::from(d)).modpow(&BigInt::from(exponent), &m);
            solve_linear(&cofactor, target, &m)
        })
        .collect::<Result<Vec<_>, _>>()?;
    crt_solve_general(&parts)
}

/// `C` with `(P/d)^8 · C ≡ target (mod d - 1)` for every `d` in the window.
pub fn solve_c(window: &PrimeWindow, target: &BigInt) -> Result<Congruence, NumberTheoryError> {
    solve_power_system(window, 8, |d| BigInt::from(d - 1), target)
}

/// `C'` with `(P/d)^16 · C' ≡ target (mod d^2 - 1)` for every `d` in the window.
pub fn solve_c_prime(window: &PrimeWindow, target: &BigInt) -> Result<Congruence, NumberTheoryError> {
    solve_power_system(window, 16, |d| BigInt::from(d) * d - 1, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn c(r: i64, m: i64) -> Congruence {
        Congruence::new(r, m).unwrap()
    }

    fn window(primes: Vec<u64>) -> PrimeWindow {
        PrimeWindow::new(primes, BigRational::new(4.into(), 1.into())).unwrap()
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[c(1, 2), c(3, 4)]), Err(NumberTheoryError::NonCoprimeModuli(2.into(), 4.into())));
        assert_eq!(crt_solve(&[c(2, 3), c(3, 5)]).unwrap(), c(8, 15));
        assert_eq!(crt_solve(&[c(0, 7)]).unwrap(), c(0, 7));
    }

    #[test]
    fn crt_by_enumeration() {
        for x in 0..15 {
            if x % 3 == 2 && x % 5 == 3 {
                assert_eq!(x, 8);
            }
        }
    }

    #[test]
    fn general_crt_handles_shared_factors() {
        assert_eq!(crt_solve_general(&[c(1, 2), c(3, 4)]).unwrap(), c(3, 4));
        assert_eq!(crt_solve_general(&[c(3, 4), c(5, 6)]).unwrap(), c(11, 12));
        assert!(matches!(crt_solve_general(&[c(0, 2), c(1, 4)]), Err(NumberTheoryError::Inconsistent(_))));
    }

    #[test]
    fn solve_c_examples() {
        assert_eq!(solve_c(&window(vec![3, 5]), &7.into()).unwrap(), c(3, 4));
        assert_eq!(solve_c(&window(vec![3]), &0.into()).unwrap(), c(0, 2));
        let w = window(vec![11, 13]);
        let target = BigInt::from(5);
        let sol = solve_c(&w, &target).unwrap();
        for d in [11u64, 13] {
            let cofactor = num_traits::pow(BigInt::from(143 / d), 8);
            assert!((cofactor * &sol.residue - &target).is_multiple_of(&BigInt::from(d - 1)));
        }
    }

    #[test]
    fn solve_c_prime_checks_each_modulus() {
        let w = window(vec![11, 13]);
        let target = BigInt::from(3 * 4 - 3);
        let sol = solve_c_prime(&w, &target).unwrap();
        for d in [11u64, 13] {
            let cofactor = num_traits::pow(BigInt::from(143 / d), 16);
            assert!((cofactor * &sol.residue - &target).is_multiple_of(&BigInt::from(d * d - 1)));
        }
    }

    #[test]
    fn linear_congruences() {
        assert_eq!(solve_linear(&4.into(), &6.into(), &10.into()).unwrap(), c(4, 5));
        assert!(solve_linear(&4.into(), &3.into(), &10.into()).is_err());
        assert_eq!(mod_inverse(&3.into(), &7.into()), Some(5.into()));
        assert_eq!(mod_inverse(&2.into(), &4.into()), None);
        assert_eq!(c(7, 4).nearest(&BigInt::from(10)), BigInt::from(11));
        assert_eq!(c(1, 4).at_least(&BigInt::from(10)), BigInt::from(13));
    }

    proptest! {
        #[test]
        fn crt_reproduces_every_residue(
            raw in prop::collection::vec((0i64..1000, 1i64..60), 1..5)
        ) {
            let parts: Vec<Congruence> = raw.iter().map(|&(r, m)| c(r, m)).collect();
            match crt_solve_general(&parts) {
                Ok(sol) => {
                    for p in &parts {
                        prop_assert!(p.holds_for(&sol.residue));
                    }
                }
                Err(_) => {
                    let lcm = parts.iter().fold(1i64, |acc, p| {
                        let m: i64 = p.modulus.clone().try_into().unwrap();
                        acc.lcm(&m)
                    });
                    let any = (0..lcm).any(|x| parts.iter().all(|p| p.holds_for(&x.into())));
                    prop_assert!(!any);
                }
            }
        }
    }
}
