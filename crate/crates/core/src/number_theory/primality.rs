use num_bigint::{BigInt, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

/// Random Miller–Rabin bases per call. Each round passes a composite with
/// probability at most 1/4, so 33 rounds bound the error by 2^-66 < 2^-64.
pub const MILLER_RABIN_ROUNDS: usize = 33;

const SMALL_PRIMES: [u32; 25] =
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97];

/// Trial division by the primes below 100 followed by
/// [`MILLER_RABIN_ROUNDS`] rounds of Miller–Rabin with bases from `rng`.
pub fn is_probable_prime<R: Rng + ?Sized>(n: &BigInt, rng: &mut R) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigInt::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let one = BigInt::one();
    let n_minus_one = n - &one;
    let mut d = n_minus_one.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    let two = BigInt::from(2);
    'witness: for _ in 0..MILLER_RABIN_ROUNDS {
        let a = rng.gen_bigint_range(&two, &n_minus_one);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number_theory::primes_up_to;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_sieve_below_twenty_thousand() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let primes = primes_up_to(20_000);
        for n in 0..20_000u64 {
            let expected = primes.binary_search(&n).is_ok();
            assert_eq!(is_probable_prime(&BigInt::from(n), &mut rng), expected, "n = {n}");
        }
    }

    #[test]
    fn carmichael_numbers_and_large_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911, 3_215_031_751] {
            assert!(!is_probable_prime(&BigInt::from(n), &mut rng), "{n}");
        }
        let m61 = (BigInt::one() << 61) - 1;
        let m127 = (BigInt::one() << 127) - 1;
        assert!(is_probable_prime(&m61, &mut rng));
        assert!(is_probable_prime(&m127, &mut rng));
        assert!(!is_probable_prime(&(&m61 * &m127), &mut rng));
        assert!(!is_probable_prime(&BigInt::from(-7), &mut rng));
    }
}
