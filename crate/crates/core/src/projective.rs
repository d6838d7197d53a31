//! Characteristic numbers of complete-intersection surfaces in products of
//! projective spaces, plus a small catalog of named surfaces.
//!
//! Computation happens in `Z[H_1..H_f] / (H_i^{n_i + 1})`. The total Chern
//! class of the surface is `prod (1 + H_i)^{n_i + 1} / prod (1 + D_a)`, and
//! a degree-2 class is integrated by multiplying with `prod D_a` and reading
//! the coefficient of `prod H_i^{n_i}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{homeo_type, CharNumbers, HomeoType, Parity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectiveError {
    #[error("expected a surface, got complex dimension {dimension}")]
    NotASurface { dimension: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),
    #[error("c1^2 + c2 = {0} is not divisible by 12")]
    NonIntegral(BigInt),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbientProduct {
    pub dims: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultidegreeCI {
    pub ambient: AmbientProduct,
    pub degrees: Vec<Vec<u64>>,
}

impl MultidegreeCI {
    pub fn new(dims: Vec<usize>, degrees: Vec<Vec<u64>>) -> Result<Self, ProjectiveError> {
        let ci = MultidegreeCI { ambient: AmbientProduct { dims }, degrees };
        ci.validate()?;
        Ok(ci)
    }

    pub fn dimension(&self) -> i64 {
        self.ambient.dims.iter().sum::<usize>() as i64 - self.degrees.len() as i64
    }

    pub fn validate(&self) -> Result<(), ProjectiveError> {
        let f = self.ambient.dims.len();
        if f == 0 || self.ambient.dims.contains(&0) {
            return Err(ProjectiveError::InvalidInput("ambient dimensions must be positive".into()));
        }
        for deg in &self.degrees {
            if deg.len() != f {
                return Err(ProjectiveError::InvalidInput(format!(
                    "multidegree {deg:?} has {} entries, ambient has {f} factors",
                    deg.len()
                )));
            }
            if deg.iter().all(|&x| x == 0) {
                return Err(ProjectiveError::InvalidInput(format!("multidegree {deg:?} is zero")));
            }
        }
        if self.dimension() != 2 {
            return Err(ProjectiveError::NotASurface { dimension: self.dimension() });
        }
        Ok(())
    }
}

/// Dense element of the truncated ring, indexed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Class {
    dims: Vec<usize>,
    coeffs: Vec<BigInt>,
}

impl Class {
    fn zero(dims: &[usize]) -> Self {
        let len = dims.iter().map(|n| n + 1).product();
        Class { dims: dims.to_vec(), coeffs: vec![BigInt::zero(); len] }
    }

    fn one(dims: &[usize]) -> Self {
        let mut c = Self::zero(dims);
        c.coeffs[0] = BigInt::one();
        c
    }

    fn exponents(&self, mut index: usize) -> Vec<usize> {
        self.dims
            .iter()
            .map(|n| {
                let e = index % (n + 1);
                index /= n + 1;
                e
            })
            .collect()
    }

    fn index(&self, exps: &[usize]) -> Option<usize> {
        let mut index = 0;
        let mut stride = 1;
        for (e, n) in exps.iter().zip(&self.dims) {
            if e > n {
                return None;
            }
            index += e * stride;
            stride *= n + 1;
        }
        Some(index)
    }

    fn linear(dims: &[usize], coeffs: &[i64]) -> Self {
        let mut c = Self::zero(dims);
        for (i, &k) in coeffs.iter().enumerate() {
            let mut exps = vec![0; dims.len()];
            exps[i] = 1;
            let idx = c.index(&exps).unwrap();
            c.coeffs[idx] = BigInt::from(k);
        }
        c
    }

    fn mul(&self, other: &Class) -> Class {
        let mut out = Class::zero(&self.dims);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let ea = self.exponents(i);
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let eb = other.exponents(j);
                let sum: Vec<usize> = ea.iter().zip(&eb).map(|(x, y)| x + y).collect();
                if let Some(k) = out.index(&sum) {
                    out.coeffs[k] += a * b;
                }
            }
        }
        out
    }

    fn add(&self, other: &Class) -> Class {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Class { dims: self.dims.clone(), coeffs }
    }

    fn degree_part(&self, degree: usize) -> Class {
        let mut out = Class::zero(&self.dims);
        for (i, c) in self.coeffs.iter().enumerate() {
            if self.exponents(i).iter().sum::<usize>() == degree {
                out.coeffs[i] = c.clone();
            }
        }
        out
    }

    /// Coefficient of the top monomial `prod H_i^{n_i}`.
    fn top(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    /// `1 / (1 + x)` for `x` without constant term.
    fn inverse_one_plus(x: &Class) -> Class {
        let total: usize = x.dims.iter().sum();
        let neg = Class { dims: x.dims.clone(), coeffs: x.coeffs.iter().map(|c| -c).collect() };
        let mut acc = Class::one(&x.dims);
        let mut power = Class::one(&x.dims);
        for _ in 0..total {
            power = power.mul(&neg);
            acc = acc.add(&power);
        }
        acc
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CiInvariants {
    pub numbers: CharNumbers,
    /// Sanity flag: a negative Euler characteristic indicates bad input.
    pub negative_euler: bool,
}

pub fn ci_invariants(x: &MultidegreeCI) -> Result<CiInvariants, ProjectiveError> {
    x.validate()?;
    let dims = &x.ambient.dims;
    let divisors: Vec<Class> =
        x.degrees.iter().map(|d| Class::linear(dims, &d.iter().map(|&v| v as i64).collect::<Vec<_>>())).collect();
    let mut chern = Class::one(dims);
    for (i, &n) in dims.iter().enumerate() {
        let mut h = vec![0i64; dims.len()];
        h[i] = 1;
        let one_plus_h = Class::one(dims).add(&Class::linear(dims, &h));
        for _ in 0..=n {
            chern = chern.mul(&one_plus_h);
        }
    }
    for d in &divisors {
        chern = chern.mul(&Class::inverse_one_plus(d));
    }
    let c1 = chern.degree_part(1);
    let c2 = chern.degree_part(2);
    let fundamental = divisors.iter().fold(Class::one(dims), |acc, d| acc.mul(d));
    let c1sq = c1.mul(&c1).mul(&fundamental).top();
    let e = c2.mul(&fundamental).top();
    let (chi, rem) = (&c1sq + &e).div_rem(&BigInt::from(12));
    if !rem.is_zero() {
        return Err(ProjectiveError::NonIntegral(&c1sq + &e));
    }
    let numbers = CharNumbers::from_chi_c1sq(chi, c1sq);
    Ok(CiInvariants { negative_euler: numbers.e().is_negative(), numbers })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiWarning {
    /// Some multidegree has a zero entry, so primitivity of the restricted
    /// hyperplane classes (and hence the divisibility) is not certified.
    AmplenessUnverified,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalClass {
    /// Coefficients of `K` in the restricted hyperplane classes.
    pub vector: Vec<i64>,
    /// Gcd of the coefficients (0 for a trivial canonical class).
    pub divisibility: u64,
    pub parity: Parity,
    pub warnings: Vec<CiWarning>,
}

pub fn canonical_vector(x: &MultidegreeCI) -> Result<CanonicalClass, ProjectiveError> {
    x.validate()?;
    let vector: Vec<i64> = x
        .ambient
        .dims
        .iter()
        .enumerate()
        .map(|(i, &n)| x.degrees.iter().map(|d| d[i] as i64).sum::<i64>() - (n as i64 + 1))
        .collect();
    let divisibility = vector.iter().fold(0u64, |g, &v| g.gcd(&v.unsigned_abs()));
    let warnings = if x.degrees.iter().any(|d| d.contains(&0)) { vec![CiWarning::AmplenessUnverified] } else { vec![] };
    Ok(CanonicalClass {
        vector,
        divisibility,
        parity: if divisibility % 2 == 0 { Parity::Spin } else { Parity::NonSpin },
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub numbers: CharNumbers,
    pub parity: Parity,
    pub homeo: HomeoType,
    pub ample_canonical: bool,
}

pub const CATALOG: [&str; 2] = ["catanese_1_2", "catanese_debarre_2_2"];

pub fn catalog_lookup(name: &str) -> Result<CatalogEntry, ProjectiveError> {
    let (description, chi, c1sq) = match name {
        "catanese_1_2" => ("Catanese surface with chi = 2, c1^2 = 1", 2, 1),
        "catanese_debarre_2_2" => ("Catanese-Debarre surface with chi = 2, c1^2 = 2", 2, 2),
        _ => return Err(ProjectiveError::UnknownEntry(name.to_string())),
    };
    let numbers = CharNumbers::from_chi_c1sq(chi, c1sq);
    let homeo = homeo_type(&numbers, Parity::NonSpin).expect("catalog entries are realizable");
    Ok(CatalogEntry {
        name: name.to_string(),
        description: description.to_string(),
        numbers,
        parity: Parity::NonSpin,
        homeo,
        ample_canonical: true,
    })
}
