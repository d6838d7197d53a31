use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use serde_with::serde_as;

use crate::invariants::CharNumbers;
use crate::json::JsonInt;

/// Building blocks for symplectic sums.
#[serde_as]
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Block {
    /// Relatively minimal elliptic surface `E(n)` without multiple fibers.
    Elliptic {
        #[serde_as(as = "JsonInt")]
        n: BigInt,
    },
    /// Gompf's manifold with `chi = 2`, `c1^2 = 1`, containing a torus and
    /// a disjoint genus-2 surface with simply connected complement.
    S,
    /// Li–Stipsicz Lefschetz fibration (not simply connected).
    X { i: u64 },
    /// `X(i)` summed with a blown-up K3 along a section.
    Y { i: u64 },
    /// `K3 # j (-CP2)`.
    K3BlownUp {
        #[serde_as(as = "JsonInt")]
        j: BigInt,
    },
}

impl Block {
    pub fn elliptic(n: impl Into<BigInt>) -> Self {
        Block::Elliptic { n: n.into() }
    }

    pub fn numbers(&self) -> CharNumbers {
        match self {
            Block::Elliptic { n } => CharNumbers::from_chi_c1sq(n.clone(), 0),
            Block::S => CharNumbers::from_chi_c1sq(2, 1),
            Block::X { i } => {
                let i = BigInt::from(*i);
                CharNumbers::from_chi_c1sq(
                    BigInt::from(25) * &i * &i + BigInt::from(30) * &i + 1,
                    BigInt::from(225) * &i * &i + BigInt::from(180) * &i,
                )
            }
            Block::Y { i } => {
                let i = BigInt::from(*i);
                CharNumbers::from_chi_c1sq(
                    BigInt::from(25) * &i * &i + BigInt::from(31) * &i + 4,
                    BigInt::from(225) * &i * &i + BigInt::from(187) * &i + 7,
                )
            }
            Block::K3BlownUp { j } => CharNumbers::from_chi_c1sq(2, -j),
        }
    }

    pub fn minimal(&self) -> bool {
        match self {
            Block::Elliptic { n } => n > &BigInt::one(),
            Block::S | Block::X { .. } | Block::Y { .. } => true,
            Block::K3BlownUp { j } => !j.is_positive(),
        }
    }

    pub fn simply_connected(&self) -> bool {
        !matches!(self, Block::X { .. })
    }

    pub fn spin(&self) -> bool {
        match self {
            Block::Elliptic { n } => n.is_even(),
            Block::K3BlownUp { j } => !j.is_positive(),
            Block::S | Block::X { .. } | Block::Y { .. } => false,
        }
    }

    /// Almost completely decomposable: known for elliptic surfaces and
    /// blown-up K3, open for the others.
    pub fn acd(&self) -> Option<bool> {
        match self {
            Block::Elliptic { .. } | Block::K3BlownUp { .. } => Some(true),
            _ => None,
        }
    }

    /// Whether the block contains a square-zero surface of genus `g` with
    /// simply connected complement, usable as a seam.
    pub fn sc_complement(&self, genus: u32) -> bool {
        match self {
            Block::S => genus == 1 || genus == 2,
            Block::Elliptic { n } => genus == 1 && n.is_positive(),
            Block::Y { .. } | Block::K3BlownUp { .. } => genus == 1,
            Block::X { .. } => false,
        }
    }

    pub fn has_surface(&self, genus: u32) -> bool {
        match self {
            Block::X { i } => genus == 1 || genus as u64 == i + 2,
            _ => self.sc_complement(genus),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Elliptic { n } => write!(f, "E({n})"),
            Block::S => write!(f, "S"),
            Block::X { i } => write!(f, "X({i})"),
            Block::Y { i } => write!(f, "Y({i})"),
            Block::K3BlownUp { j } => write!(f, "K3#{j}CP2bar"),
        }
    }
}

/// Symplectic sum along a square-zero surface of genus `g`:
/// `e = e1 + e2 + 4(g - 1)`, `sigma = sigma1 + sigma2`.
pub fn sum_pair(a: &CharNumbers, b: &CharNumbers, genus: u32) -> CharNumbers {
    let e = a.e() + b.e() + BigInt::from(4) * (BigInt::from(genus) - 1);
    CharNumbers::from_e_sigma(e, a.sigma() + b.sigma()).expect("sum of realizable numbers")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_table() {
        for i in 1..=10u64 {
            let x = Block::X { i }.numbers();
            let y = Block::Y { i }.numbers();
            let ii = i as i64;
            assert_eq!(x.chi(), &BigInt::from(25 * ii * ii + 30 * ii + 1));
            assert_eq!(x.c1sq(), &BigInt::from(225 * ii * ii + 180 * ii));
            assert_eq!(y.chi(), &BigInt::from(25 * ii * ii + 31 * ii + 4));
            assert_eq!(y.c1sq(), &BigInt::from(225 * ii * ii + 187 * ii + 7));
            let k3 = Block::K3BlownUp { j: BigInt::from(i + 1) }.numbers();
            assert_eq!(sum_pair(&x, &k3, (i + 2) as u32), y);
        }
    }

    #[test]
    fn flags() {
        assert!(!Block::elliptic(1).minimal());
        assert!(Block::elliptic(2).minimal() && Block::elliptic(2).spin());
        assert!(!Block::elliptic(3).spin());
        assert!(!Block::X { i: 1 }.simply_connected());
        assert_eq!(Block::S.acd(), None);
        assert_eq!(Block::S.numbers(), CharNumbers::from_chi_c1sq(2, 1));
    }

    #[test]
    fn torus_sums_are_additive() {
        let s = sum_pair(&Block::elliptic(2).numbers(), &Block::elliptic(3).numbers(), 1);
        assert_eq!(s, CharNumbers::from_chi_c1sq(5, 0));
    }
}
