//! Exact counts of (generally reducible) su(3) modules in a fixed dimension.
//!
//! A module of dimension `D` decomposes into irreducibles whose dimensions
//! form a partition of `D` with parts in the census support. A shape with
//! part `p` repeated `n` times admits `S(n, xi(p))` choices for those
//! components, where `S(n, k)` counts multisets of size `n` from `k` symbols.
//!
//! Two independent routes are provided: enumeration of partitions
//! ([`module_counts`]) and a bivariate generating-function table
//! ([`GfTable`]). They must agree cell by cell.

use alloc::vec;
use alloc::vec::Vec;
use alloc::collections::BTreeMap;
use core::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::irreps::DimensionCensus;
use crate::partitions::{enumerate_restricted, PartSet, PartitionShape};

/// Exact nonnegative count.
pub type BigCount = BigUint;

/// Exact nonnegative rational in lowest terms.
pub type ExactFraction = Ratio<BigUint>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModError {
    /// The census does not reach the dimension that was asked for.
    InsufficientCensus { needed: u32, limit: u32 },
    /// Dimension zero has no modules to count.
    ZeroDimension,
    /// Two counting routes disagreed; this is a bug, never an input error.
    RouteMismatch { dimension: u32 },
}

impl fmt::Display for ModError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModError::InsufficientCensus { needed, limit } => {
                write!(f, "census covers dimensions up to {limit}, but {needed} is needed")
            }
            ModError::ZeroDimension => f.write_str("dimension must be positive"),
            ModError::RouteMismatch { dimension } => {
                write!(f, "counting routes disagree in dimension {dimension}")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ModError {}

fn check_census(d: u32, census: &DimensionCensus) -> Result<(), ModError> {
    if d == 0 {
        return Err(ModError::ZeroDimension);
    }
    if census.limit() < d {
        return Err(ModError::InsufficientCensus { needed: d, limit: census.limit() });
    }
    Ok(())
}

/// Number of size-`n` multisets drawn from `k` symbols, `C(n + k - 1, n)`.
pub fn multiset_count(n: u64, k: u64) -> BigCount {
    if k == 0 {
        return if n == 0 { BigUint::one() } else { BigUint::zero() };
    }
    // C(n + k - 1, r) with r the smaller of n and k - 1
    let top = n + k - 1;
    let r = n.min(k - 1);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= top - i;
        acc /= i + 1;
    }
    acc
}

/// Number of modules whose irreducible components have the given shape.
pub fn shape_count(shape: &PartitionShape, census: &DimensionCensus) -> Result<BigCount, ModError> {
    let mut acc = BigUint::one();
    for &(part, mult) in shape.entries() {
        let xi = census
            .count(part)
            .ok_or(ModError::InsufficientCensus { needed: part, limit: census.limit() })?;
        if xi == 0 {
            return Ok(BigUint::zero());
        }
        acc *= multiset_count(mult as u64, xi);
    }
    Ok(acc)
}

/// Everything the enumeration route yields for one dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleCounts {
    pub dimension: u32,
    /// All modules.
    pub total: BigCount,
    /// Modules with at least one singlet component.
    pub singlet: BigCount,
    /// `by_components[n]` counts modules with exactly `n` irreducible
    /// components, `0 <= n <= dimension`.
    pub by_components: Vec<BigCount>,
    /// Number of contributing partitions.
    pub shapes: u64,
}

/// Accumulates modules over partitions with parts from `parts`.
fn sum_over_partitions(
    d: u32,
    census: &DimensionCensus,
    parts: &PartSet,
) -> Result<(BigCount, BigCount, Vec<BigCount>, u64), ModError> {
    let mut total = BigUint::zero();
    let mut singlet = BigUint::zero();
    let mut by_components = vec![BigUint::zero(); d as usize + 1];
    let mut shapes = 0;
    let mut stream = enumerate_restricted(d, parts, d);
    while let Some(p) = stream.advance() {
        let shape = PartitionShape::from_parts(p);
        let weight = shape_count(&shape, census)?;
        if p.last() == Some(&1) {
            singlet += &weight;
        }
        by_components[p.len()] += &weight;
        total += weight;
        shapes += 1;
    }
    Ok((total, singlet, by_components, shapes))
}

/// Counts all modules of dimension `d` by enumerating partitions with parts
/// in the census support.
///
/// The singlet count is cross-checked by subtracting the count over
/// partitions that avoid the part 1.
pub fn module_counts(d: u32, census: &DimensionCensus) -> Result<ModuleCounts, ModError> {
    check_census(d, census)?;
    let support = census.support_set();
    let (total, singlet, by_components, shapes) = sum_over_partitions(d, census, &support)?;
    let (without_singlets, ..) = sum_over_partitions(d, census, &support.without(1))?;
    if &total - &without_singlets != singlet {
        return Err(ModError::RouteMismatch { dimension: d });
    }
    Ok(ModuleCounts { dimension: d, total, singlet, by_components, shapes })
}

/// Number of su(3) modules of dimension `d`.
pub fn mod_total(d: u32, census: &DimensionCensus) -> Result<BigCount, ModError> {
    module_counts(d, census).map(|m| m.total)
}

/// Number of su(3) modules of dimension `d` containing a singlet.
pub fn mod_singlet(d: u32, census: &DimensionCensus) -> Result<BigCount, ModError> {
    module_counts(d, census).map(|m| m.singlet)
}

/// Fraction of modules of dimension `d` that contain a singlet.
pub fn singlet_fraction(d: u32, census: &DimensionCensus) -> Result<ExactFraction, ModError> {
    module_counts(d, census).map(|m| m.singlet_fraction())
}

/// Exact distribution of the number of irreducible components.
pub fn nss_distribution(d: u32, census: &DimensionCensus) -> Result<NssDistribution, ModError> {
    module_counts(d, census).map(|m| m.nss_distribution())
}

impl ModuleCounts {
    pub fn singlet_fraction(&self) -> ExactFraction {
        Ratio::new(self.singlet.clone(), self.total.clone())
    }

    pub fn nss_distribution(&self) -> NssDistribution {
        NssDistribution::from_counts(self.dimension, self.by_components.clone())
    }
}

/// `f_d(N)`: fraction of modules of dimension `d` with exactly `N`
/// irreducible components, `1 <= N <= d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NssDistribution {
    d: u32,
    counts: Vec<BigCount>,
    total: BigCount,
}

impl NssDistribution {
    /// `counts[n]` is the number of modules with `n` components; index 0 is
    /// ignored and `counts` is padded or truncated to `d + 1` entries.
    pub fn from_counts(d: u32, mut counts: Vec<BigCount>) -> Self {
        counts.resize(d as usize + 1, BigUint::zero());
        counts[0] = BigUint::zero();
        let total = counts.iter().sum();
        Self { d, counts, total }
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    pub fn total(&self) -> &BigCount {
        &self.total
    }

    /// Number of modules with `n` components; zero outside `1..=d`.
    pub fn count(&self, n: u32) -> BigCount {
        self.counts.get(n as usize).cloned().unwrap_or_default()
    }

    pub fn weight(&self, n: u32) -> ExactFraction {
        if self.total.is_zero() {
            return Ratio::from_integer(BigUint::zero());
        }
        Ratio::new(self.count(n), self.total.clone())
    }

    /// `(N, count, weight)` for every `N` with a nonzero count.
    pub fn nonzero(&self) -> impl Iterator<Item = (u32, &BigCount, ExactFraction)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(n, c)| (n as u32, c, Ratio::new(c.clone(), self.total.clone())))
    }

    /// Weights as floats, index `N - 1` for `N` in `1..=d`.
    pub fn weights_f64(&self) -> Vec<f64> {
        (1..=self.d).map(|n| ratio_to_f64(&self.weight(n))).collect()
    }
}

/// Nearest float to an exact fraction.
pub fn ratio_to_f64(r: &ExactFraction) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Coefficients of `prod_d (1 - y x^d)^(-xi(d))` for total dimension up to a
/// limit: entry `(D, N)` counts modules of dimension `D` with `N` components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GfTable {
    limit: u32,
    cells: Vec<Vec<BigCount>>,
}

impl GfTable {
    /// Multiplies in one geometric factor `1 / (1 - y x^d)` per irreducible
    /// module of dimension `d`.
    pub fn build(limit: u32, census: &DimensionCensus) -> Result<Self, ModError> {
        check_census(limit.max(1), census)?;
        let size = limit as usize + 1;
        let mut cells: Vec<Vec<BigCount>> = (0..size).map(|dim| vec![BigUint::zero(); dim + 1]).collect();
        cells[0][0] = BigUint::one();
        for (d, xi) in census.rows().take_while(|&(d, _)| d <= limit) {
            let d = d as usize;
            for _ in 0..xi {
                for dim in d..size {
                    let (lower, upper) = cells.split_at_mut(dim);
                    let src = &lower[dim - d];
                    let dst = &mut upper[0];
                    for (n, c) in src.iter().enumerate() {
                        if !c.is_zero() {
                            dst[n + 1] += c;
                        }
                    }
                }
            }
        }
        Ok(Self { limit, cells })
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    /// Modules of dimension `dim` with `n` components.
    pub fn cell(&self, dim: u32, n: u32) -> BigCount {
        self.cells
            .get(dim as usize)
            .and_then(|row| row.get(n as usize))
            .cloned()
            .unwrap_or_default()
    }

    /// Row `dim`, indexed by component count.
    pub fn row(&self, dim: u32) -> &[BigCount] {
        &self.cells[dim as usize]
    }

    pub fn total(&self, dim: u32) -> BigCount {
        self.row(dim).iter().sum()
    }

    /// Modules of dimension `dim` with a singlet: total minus the modules
    /// built only from components of dimension at least 3.
    pub fn singlet(&self, dim: u32, census: &DimensionCensus) -> Result<BigCount, ModError> {
        let without = GfTable::build(dim, &census.without_dimension(1))?;
        Ok(self.total(dim) - without.total(dim))
    }

    pub fn nss_distribution(&self, dim: u32) -> NssDistribution {
        NssDistribution::from_counts(dim, self.row(dim).to_vec())
    }
}

/// The nonzero cells `(D, N)` of the generating-function table for a single
/// total dimension `D`, keyed by `N`.
pub fn gf_oracle(d: u32, census: &DimensionCensus) -> Result<BTreeMap<u32, BigCount>, ModError> {
    let table = GfTable::build(d, census)?;
    Ok(table
        .row(d)
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| (n as u32, c.clone()))
        .collect())
}
