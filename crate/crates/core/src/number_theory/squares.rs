use num_bigint::{BigInt, RandBigInt};
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::is_probable_prime;

/// Inputs up to this value are decomposed by exhaustive search.
pub const BRUTE_FORCE_LIMIT: u64 = 1_000_000;

/// Floor square root of a non-negative integer.
pub fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of negative {n}");
    n.sqrt()
}

/// A square root of `n` modulo the odd prime `p`, or `None` when `n` is a
/// non-residue (or `p` turns out not to be prime).
pub fn tonelli_shanks(n: &BigInt, p: &BigInt) -> Option<BigInt> {
    let n = n.mod_floor(p);
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    let one = BigInt::one();
    let p_minus_one = p - &one;
    let half = &p_minus_one >> 1;
    if n.modpow(&half, p) != one {
        return None;
    }
    let mut q = p_minus_one.clone();
    let mut s = 0u32;
    while q.is_even() {
        q >>= 1;
        s += 1;
    }
    if s == 1 {
        let r = n.modpow(&((p + &one) >> 2), p);
        return (&r * &r % p == n).then_some(r);
    }
    let mut z = BigInt::from(2);
    let mut attempts = 0;
    while z.modpow(&half, p) != p_minus_one {
        z += 1;
        attempts += 1;
        if attempts > 10_000 {
            return None;
        }
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = n.modpow(&q, p);
    let mut r = n.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u32;
        let mut probe = t.clone();
        while !probe.is_one() {
            probe = &probe * &probe % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(BigInt::one() << (m - i - 1)), p);
        m = i;
        c = &b * &b % p;
        t = t * &c % p;
        r = r * b % p;
    }
    (&r * &r % p == n).then_some(r)
}

/// A square root of `-1` modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: &BigInt) -> Option<BigInt> {
    tonelli_shanks(&(p - 1u32), p)
}

/// `(a, b)` with `a^2 + b^2 = p` for a prime `p ≡ 1 (mod 4)`, by Euclidean
/// descent from a square root of `-1` (Hermite–Serret). `None` if the
/// descent does not close, which only happens when `p` is composite.
pub fn two_square_prime(p: &BigInt) -> Option<(BigInt, BigInt)> {
    if p.is_one() {
        return Some((BigInt::one(), BigInt::zero()));
    }
    if p == &BigInt::from(2) {
        return Some((BigInt::one(), BigInt::one()));
    }
    let x = sqrt_minus_one(p)?;
    let limit = isqrt(p);
    let (mut a, mut b) = (p.clone(), x);
    while b > limit {
        let r = &a % &b;
        a = b;
        b = r;
    }
    let rest = p - &b * &b;
    let c = isqrt(&rest);
    (&c * &c == rest).then(|| if b >= c { (b, c) } else { (c, b) })
}

/// Exhaustive search in descending order; the result is sorted descending.
pub fn four_square_brute(n: u64) -> [u64; 4] {
    let root = |v: u64| v.sqrt();
    for a in (0..=root(n)).rev() {
        let ra = n - a * a;
        for b in (0..=root(ra).min(a)).rev() {
            let rb = ra - b * b;
            for c in (0..=root(rb).min(b)).rev() {
                let rc = rb - c * c;
                let d = root(rc);
                if d * d == rc && d <= c {
                    return [a, b, c, d];
                }
            }
        }
    }
    unreachable!("every non-negative integer is a sum of four squares")
}

/// Four-square decomposition with a configurable brute-force threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourSquare {
    pub brute_force_limit: u64,
}

impl Default for FourSquare {
    fn default() -> Self {
        FourSquare { brute_force_limit: BRUTE_FORCE_LIMIT }
    }
}

impl FourSquare {
    /// `[a, b, c, d]` sorted descending with `a^2 + b^2 + c^2 + d^2 = n`.
    /// Deterministic for a given seed.
    pub fn decompose(&self, n: &BigInt, seed: u64) -> [BigInt; 4] {
        assert!(!n.is_negative(), "four_square of negative {n}");
        if let Some(small) = n.to_u64().filter(|&v| v <= self.brute_force_limit) {
            return four_square_brute(small).map(BigInt::from);
        }
        let mut m = n.clone();
        let mut scale = BigInt::one();
        while !m.is_zero() && (&m % 4u32).is_zero() {
            m >>= 2;
            scale <<= 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = loop {
            if let Some(parts) = rabin_shallit_step(&m, &mut rng) {
                break parts;
            }
        };
        for v in out.iter_mut() {
            *v *= &scale;
        }
        out.sort_by(|x, y| y.cmp(x));
        debug_assert_eq!(out.iter().map(|v| v * v).sum::<BigInt>(), *n);
        out
    }
}

/// One randomized attempt: pick `a, b` so that `m - a^2 - b^2` is
/// `1 (mod 4)`, and if that remainder is prime split it into two squares.
fn rabin_shallit_step<R: Rng>(m: &BigInt, rng: &mut R) -> Option<[BigInt; 4]> {
    if m.is_zero() {
        return Some(std::array::from_fn(|_| BigInt::zero()));
    }
    // Parities of (a, b) giving a^2 + b^2 ≡ m - 1 (mod 4).
    let odd_count = match (m % 4u32).to_u32().unwrap() {
        1 => 0,
        2 => 1,
        3 => 2,
        _ => unreachable!("powers of four are stripped"),
    };
    let pick = |bound: &BigInt, odd: bool, rng: &mut R| -> Option<BigInt> {
        let mut v = rng.gen_bigint_range(&BigInt::zero(), &(bound + 1u32));
        if v.is_odd() != odd {
            v += 1;
            if &v > bound {
                v -= 2;
            }
        }
        (!v.is_negative() && v.is_odd() == odd && &v <= bound).then_some(v)
    };
    let a = pick(&isqrt(m), odd_count >= 1, rng)?;
    let rest = m - &a * &a;
    let b = pick(&isqrt(&rest), odd_count == 2, rng)?;
    let p = rest - &b * &b;
    if p.is_zero() {
        return Some([a, b, BigInt::zero(), BigInt::zero()]);
    }
    if !p.is_one() && !is_probable_prime(&p, rng) {
        return None;
    }
    let (c, d) = two_square_prime(&p)?;
    let parts = [a, b, c, d];
    (parts.iter().map(|v| v * v).sum::<BigInt>() == *m).then_some(parts)
}

/// [`FourSquare::decompose`] with the default threshold.
pub fn four_square(n: &BigInt, seed: u64) -> [BigInt; 4] {
    FourSquare::default().decompose(n, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sum_sq(v: &[BigInt; 4]) -> BigInt {
        v.iter().map(|x| x * x).sum()
    }

    #[test]
    fn small_examples() {
        assert_eq!(four_square(&BigInt::zero(), 0), [0, 0, 0, 0].map(BigInt::from));
        assert_eq!(four_square(&BigInt::from(7), 0), [2, 1, 1, 1].map(BigInt::from));
        let n = BigInt::from(1_000_003u64);
        assert_eq!(sum_sq(&four_square(&n, 1)), n);
    }

    #[test]
    fn brute_force_is_exhaustively_right() {
        for n in 0..=10_000u64 {
            let [a, b, c, d] = four_square_brute(n);
            assert_eq!(a * a + b * b + c * c + d * d, n);
            assert!(a >= b && b >= c && c >= d);
        }
    }

    #[test]
    fn randomized_path_on_small_inputs() {
        let forced = FourSquare { brute_force_limit: 0 };
        for n in 0..=2_000u64 {
            let n = BigInt::from(n);
            assert_eq!(sum_sq(&forced.decompose(&n, n.to_u64().unwrap())), n);
        }
    }

    #[test]
    fn huge_inputs() {
        let n: BigInt = num_traits::pow(BigInt::from(10), 160) + 12345;
        assert_eq!(sum_sq(&four_square(&n, 9)), n);
        let n = num_traits::pow(BigInt::from(4), 90) * 7;
        assert_eq!(sum_sq(&four_square(&n, 9)), n);
    }

    #[test]
    fn deterministic_given_seed() {
        let n: BigInt = num_traits::pow(BigInt::from(3), 200);
        assert_eq!(four_square(&n, 5), four_square(&n, 5));
    }

    #[test]
    fn modular_roots() {
        for p in [5u32, 13, 17, 97, 257, 65537, 40961] {
            let p = BigInt::from(p);
            let r = sqrt_minus_one(&p).unwrap();
            assert_eq!((&r * &r + 1u32) % &p, BigInt::zero());
            let (a, b) = two_square_prime(&p).unwrap();
            assert_eq!(&a * &a + &b * &b, p);
        }
        assert_eq!(tonelli_shanks(&3.into(), &7.into()), None);
        let r = tonelli_shanks(&2.into(), &7.into()).unwrap();
        assert_eq!(&r * &r % 7, BigInt::from(2));
    }

    proptest! {
        #[test]
        fn random_u64_inputs(n in any::<u64>(), seed in any::<u64>()) {
            let n = BigInt::from(n);
            prop_assert_eq!(sum_sq(&four_square(&n, seed)), n);
        }
    }
}
