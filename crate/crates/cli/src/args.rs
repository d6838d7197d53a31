use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Subcommand, ValueEnum};
use geography_core::json::{JsonInt, JsonRational};
use geography_core::salvetti::ParityTarget;
use geography_core::symplectic::RegionConfig;
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_with::{serde_as, DisplayFromStr};

fn rational(text: &str) -> Result<BigRational, String> {
    geography_core::parse_rational(text)
}

/// One cover stage written `d:m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageArg {
    pub d: u64,
    pub m: BigInt,
}

impl FromStr for StageArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (d, m) = s.split_once(':').ok_or_else(|| format!("stage {s:?} is not d:m"))?;
        Ok(StageArg {
            d: d.trim().parse().map_err(|_| format!("bad degree in {s:?}"))?,
            m: m.trim().parse().map_err(|_| format!("bad parameter in {s:?}"))?,
        })
    }
}

impl fmt::Display for StageArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.d, self.m)
    }
}

/// Comma-separated multidegree such as `2,1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multidegree(pub Vec<u64>);

impl FromStr for Multidegree {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| format!("bad degree {t:?} in {s:?}")))
            .collect::<Result<Vec<_>, _>>()
            .map(Multidegree)
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityArg {
    Odd,
    Even,
}

impl From<ParityArg> for ParityTarget {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Odd => ParityTarget::OddDivisibility,
            ParityArg::Even => ParityTarget::EvenDivisibility,
        }
    }
}

#[derive(Debug, Clone, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Characteristic numbers, divisibility and verdict of a cover tower.
    Tower(TowerArgs),
    /// k homeomorphic towers with pairwise distinct divisibilities.
    Synth(SynthArgs),
    /// Symplectic-sum recipe for one lattice point.
    Plan(PlanArgs),
    /// Plan a point, then dissolve the stabilised recipe.
    Dissolve(PlanArgs),
    /// CSV map of region tags and recipes over a lattice rectangle.
    Map(MapArgs),
    /// Invariants of a complete intersection in a product of projective spaces.
    Ci(CiArgs),
    /// Einstein and non-Einstein structures on one homeomorphism type.
    Match(MatchArgs),
    /// Non-Einstein smooth structures on p CP2 # q (-CP2).
    Pq(PqArgs),
    /// Replay every published example and report pass/fail.
    Examples,
    /// Re-run the configuration embedded in a report and compare.
    #[serde(skip)]
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Tower(_) => "tower",
            Command::Synth(_) => "synth",
            Command::Plan(_) => "plan",
            Command::Dissolve(_) => "dissolve",
            Command::Map(_) => "map",
            Command::Ci(_) => "ci",
            Command::Match(_) => "match",
            Command::Pq(_) => "pq",
            Command::Examples => "examples",
            Command::Replay(_) => "replay",
        }
    }
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct TowerArgs {
    /// Stages `d:m`, innermost first, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub stages: Vec<StageArg>,
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct SynthArgs {
    #[arg(long)]
    pub k: usize,
    /// Weights of the leading double covers, summing to 1.
    #[arg(long, value_delimiter = ',', value_parser = rational, required = true)]
    #[serde_as(as = "Vec<JsonRational>")]
    pub mu: Vec<BigRational>,
    #[arg(long, value_parser = rational, default_value = "1/50")]
    #[serde_as(as = "JsonRational")]
    pub delta: BigRational,
    /// Bound on `(d + 1) / (d' - 1)` over the prime window.
    #[arg(long, value_parser = rational, default_value = "100000001/100000000")]
    #[serde_as(as = "JsonRational")]
    pub alpha: BigRational,
    #[arg(long, value_enum, default_value = "odd")]
    pub parity: ParityArg,
    /// Explicit `m0` instead of the smallest admissible value.
    #[arg(long)]
    #[serde_as(as = "Option<JsonInt>")]
    pub m0: Option<BigInt>,
    #[arg(long, default_value_t = 24)]
    pub max_attempts: u32,
    #[arg(long, default_value_t = 10_000_000_000)]
    pub prime_limit: u64,
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct RegionArgs {
    #[arg(long, value_parser = rational, default_value = "1/3")]
    #[serde_as(as = "JsonRational")]
    pub epsilon: BigRational,
    #[arg(long, default_value_t = 72)]
    pub c0: i64,
    /// Indices `i` of the `Y(i)` blocks the planner may use.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6,7,8,9,10,11,12")]
    pub y_indices: Vec<u64>,
}

impl RegionArgs {
    pub fn config(&self) -> RegionConfig {
        RegionConfig { epsilon: self.epsilon.clone(), c0: self.c0.into(), y_indices: self.y_indices.clone() }
    }
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PlanArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde_as(as = "JsonInt")]
    pub chi: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    #[serde_as(as = "JsonInt")]
    pub c1sq: BigInt,
    #[command(flatten)]
    pub region: RegionArgs,
}

#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MapArgs {
    #[arg(long, default_value_t = 1)]
    pub chi_min: u64,
    #[arg(long, default_value_t = 100)]
    pub chi_max: u64,
    #[command(flatten)]
    pub region: RegionArgs,
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct CiArgs {
    /// Dimensions of the projective factors.
    #[arg(long, value_delimiter = ',', required_unless_present = "entry")]
    pub ambient: Vec<usize>,
    /// One multidegree per defining equation; repeat the flag.
    #[arg(long = "degrees", required_unless_present = "entry")]
    #[serde_as(as = "Vec<DisplayFromStr>")]
    pub degrees: Vec<Multidegree>,
    /// Catalogued surface instead of a complete intersection.
    #[arg(long, conflicts_with_all = ["ambient", "degrees"])]
    pub entry: Option<String>,
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct MatchArgs {
    #[command(flatten)]
    pub synth: SynthArgs,
    /// Consecutive `c1^2` values tried on the symplectic side.
    #[arg(long, default_value_t = 64)]
    pub candidates: u32,
    #[arg(long, default_value_t = 2)]
    pub entries: usize,
    #[arg(long, value_delimiter = ',', default_value = "2,3,5,7")]
    pub multiplicities: Vec<u64>,
    /// Require `3b > c1^2` rather than `3b >= c1^2`.
    #[arg(long)]
    pub strict: bool,
    #[command(flatten)]
    pub region: RegionArgs,
}

#[serde_as]
#[derive(Debug, Clone, Args, Serialize, Deserialize)]
pub struct PqArgs {
    #[arg(long, allow_hyphen_values = true)]
    #[serde_as(as = "JsonInt")]
    pub p: BigInt,
    #[arg(long, allow_hyphen_values = true)]
    #[serde_as(as = "JsonInt")]
    pub q: BigInt,
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    /// JSON report written by any other subcommand.
    pub report: PathBuf,
}
