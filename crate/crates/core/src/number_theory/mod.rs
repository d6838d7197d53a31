//! Big-integer primitives behind the branched-cover synthesis: prime
//! windows, linear congruences and Chinese remaindering, probabilistic
//! primality, modular square roots and four-square decompositions.

mod congruence;
mod primality;
mod sieve;
mod squares;

pub use congruence::{
    crt_solve, crt_solve_general, mod_inverse, solve_c, solve_c_prime, solve_linear, solve_power_system, Congruence,
};
pub use primality::{is_probable_prime, MILLER_RABIN_ROUNDS};
pub use sieve::{primes_in_window, primes_up_to, PrimeWindow, SegmentedSieve};
pub use squares::{
    four_square, four_square_brute, isqrt, sqrt_minus_one, tonelli_shanks, two_square_prime, FourSquare,
    BRUTE_FORCE_LIMIT,
};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumberTheoryError {
    #[error("no qualifying window of {k} primes below {limit}")]
    Exhausted { k: usize, limit: u64 },
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(BigInt, BigInt),
    #[error("congruences are inconsistent: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
