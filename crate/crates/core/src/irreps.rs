//! Irreducible su(3) modules: Weyl dimensions, cumulative counts and the
//! per-dimension census.
//!
//! An irreducible module is labelled by a Young diagram with row lengths
//! `(n1, n2)`, `0 <= n2 <= n1`. Writing `x = n1 + 2` and `y = n2 + 1`, its
//! dimension is `x * y * (x - y) / 2`. All counting here is done in exact
//! integer arithmetic on the doubled quantity `x * y * (x - y)`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::partitions::PartSet;

/// Young diagram `(n1, n2)` labelling an irreducible su(3) module.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YoungDiagram {
    n1: u32,
    n2: u32,
}

/// Returned by [`YoungDiagram::new`] when `n2 > n1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvalidDiagram {
    pub n1: u32,
    pub n2: u32,
}

impl fmt::Display for InvalidDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid Young diagram ({}, {}): second row exceeds first", self.n1, self.n2)
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InvalidDiagram {}

impl YoungDiagram {
    pub fn new(n1: u32, n2: u32) -> Result<Self, InvalidDiagram> {
        if n2 > n1 {
            return Err(InvalidDiagram { n1, n2 });
        }
        Ok(Self { n1, n2 })
    }

    pub fn n1(&self) -> u32 {
        self.n1
    }

    pub fn n2(&self) -> u32 {
        self.n2
    }

    /// The conjugate module `(n1, n1 - n2)`. It has the same dimension.
    pub fn conjugate(&self) -> Self {
        Self { n1: self.n1, n2: self.n1 - self.n2 }
    }

    pub fn is_self_conjugate(&self) -> bool {
        2 * self.n2 == self.n1
    }
}

/// Twice the Weyl dimension, `x * y * (x - y)` with `x = n1 + 2`, `y = n2 + 1`.
#[inline]
fn doubled_dim(x: u64, y: u64) -> u128 {
    x as u128 * y as u128 * (x - y) as u128
}

/// Dimension of the irreducible module labelled by `diagram`.
pub fn weyl_dim(diagram: YoungDiagram) -> u64 {
    let x = diagram.n1 as u64 + 2;
    let y = diagram.n2 as u64 + 1;
    (doubled_dim(x, y) / 2) as u64
}

/// A positive real threshold stored exactly as `2 * D`, so that the
/// half-integers `d ± 1/2` are representable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RealThreshold {
    twice_value: u64,
}

impl RealThreshold {
    /// Threshold `twice_value / 2`. Returns `None` for zero.
    pub fn from_twice(twice_value: u64) -> Option<Self> {
        (twice_value >= 1).then_some(Self { twice_value })
    }

    /// The half-integer `d + 1/2`.
    pub fn just_above(d: u64) -> Self {
        Self { twice_value: 2 * d + 1 }
    }

    /// The half-integer `d - 1/2`. Requires `d >= 1`.
    pub fn just_below(d: u64) -> Option<Self> {
        Self::from_twice((2 * d).checked_sub(1)?)
    }

    pub fn twice_value(&self) -> u64 {
        self.twice_value
    }

    pub fn as_f64(&self) -> f64 {
        self.twice_value as f64 / 2.0
    }
}

fn isqrt(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let mut r = libm::sqrt(n as f64) as u128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

fn icbrt(n: u128) -> u128 {
    let mut r = libm::cbrt(n as f64) as u128;
    while r > 0 && r * r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Number of `y` in `1..x` for which `x * y * (x - y) > twice`.
///
/// These form a symmetric interval around `x / 2`; the float root is only a
/// starting point and the end of the interval is pinned by exact tests.
fn excluded_rows(x: u64, twice: u64) -> u64 {
    let twice = twice as u128;
    let mid = x / 2;
    if mid == 0 || doubled_dim(x, mid) <= twice {
        return 0;
    }
    let xf = x as f64;
    let disc = xf * xf - 4.0 * twice as f64 / xf;
    let lo = x - mid; // ceil(x / 2)
    let mut hi = if disc > 0.0 {
        let est = libm::floor(0.5 * (xf + libm::sqrt(disc)));
        (est as u64).clamp(lo, x - 1)
    } else {
        lo
    };
    while hi < x - 1 && doubled_dim(x, hi + 1) > twice {
        hi += 1;
    }
    while doubled_dim(x, hi) <= twice {
        hi -= 1;
    }
    2 * hi + 1 - x
}

/// Number of irreducible modules whose dimension is at most `threshold`.
///
/// Uses the closed form: with `l` the largest `x` for which the smallest
/// module of that width fits and `k = floor(2 * D^(1/3))`, every width
/// `x <= k` contributes all `x - 1` diagrams and wider ones lose the rows
/// between the two roots of `x * y * (x - y) = 2D`.
pub fn count_irreps_upto(threshold: RealThreshold) -> u64 {
    let twice = threshold.twice_value;
    // largest l with l (l - 1) <= 2D
    let mut l = (1 + isqrt(1 + 4 * twice as u128)) / 2;
    while l > 0 && l * (l - 1) > twice as u128 {
        l -= 1;
    }
    let l = l as u64;
    // largest k with k^3 <= 8D
    let k = icbrt(4 * twice as u128) as u64;
    let full = l * l.saturating_sub(1) / 2;
    let excluded: u64 = (k.max(1) + 1..=l).map(|x| excluded_rows(x, twice)).sum();
    full - excluded
}

/// Number of inequivalent irreducible modules of dimension exactly `d`.
pub fn xi(d: u64) -> u64 {
    match RealThreshold::just_below(d) {
        Some(below) => count_irreps_upto(RealThreshold::just_above(d)) - count_irreps_upto(below),
        None => 0,
    }
}

/// Counts diagrams of dimension `d` by scanning them directly.
pub fn xi_bruteforce(d: u64) -> u64 {
    let mut count = 0;
    let mut n1: u64 = 0;
    // the smallest module with first row n1 has dimension (n1 + 2)(n1 + 1) / 2
    while (n1 + 2) * (n1 + 1) / 2 <= d {
        for n2 in 0..=n1 {
            if doubled_dim(n1 + 2, n2 + 1) == 2 * d as u128 {
                count += 1;
            }
        }
        n1 += 1;
    }
    count
}

/// Table `d -> xi(d)` for `1 <= d <= limit`.
///
/// Immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionCensus {
    limit: u32,
    counts: Vec<u64>,
    mismatches: Vec<u32>,
}

impl DimensionCensus {
    pub fn limit(&self) -> u32 {
        self.limit
    }

    /// `xi(d)`, or `None` when `d` is zero or beyond the census limit.
    pub fn count(&self, d: u32) -> Option<u64> {
        if d == 0 || d > self.limit {
            None
        } else {
            Some(self.counts[d as usize])
        }
    }

    /// Dimensions with at least one irreducible module, ascending.
    pub fn support(&self) -> impl Iterator<Item = u32> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(d, _)| d as u32)
    }

    /// `(d, xi(d))` for every `d` in the support.
    pub fn rows(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.support().map(move |d| (d, self.counts[d as usize]))
    }

    /// The support as a part set.
    pub fn support_set(&self) -> PartSet {
        PartSet::finite(self.support()).expect("support never contains zero")
    }

    /// Total number of irreducible modules with dimension at most the limit.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// A copy with `xi(d)` set to zero.
    pub(crate) fn without_dimension(&self, d: u32) -> Self {
        let mut out = self.clone();
        if let Some(c) = out.counts.get_mut(d as usize) {
            *c = 0;
        }
        out
    }

    /// Dimensions where the closed form disagreed with the diagram sweep.
    /// The stored counts always come from the sweep.
    pub fn closed_form_mismatches(&self) -> &[u32] {
        &self.mismatches
    }
}

/// Builds the census up to `limit` from one sweep over all diagrams and
/// cross-checks every entry against the closed form.
pub fn build_census(limit: u32) -> DimensionCensus {
    let limit = limit.max(1);
    let mut counts = vec![0u64; limit as usize + 1];
    let twice_limit = 2 * limit as u128;
    let mut x: u64 = 2;
    while doubled_dim(x, 1) <= twice_limit {
        for y in 1..x {
            let twice = doubled_dim(x, y);
            if twice <= twice_limit {
                counts[(twice / 2) as usize] += 1;
            }
        }
        x += 1;
    }
    let mismatches = (1..=limit).filter(|&d| xi(d as u64) != counts[d as usize]).collect();
    DimensionCensus { limit, counts, mismatches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn diagram(n1: u32, n2: u32) -> YoungDiagram {
        YoungDiagram::new(n1, n2).unwrap()
    }

    // independent oracle: count every diagram with dimension <= floor(D)
    fn cumulative_bruteforce(d_floor: u64) -> u64 {
        let bound = 2 * (libm::ceil(libm::sqrt(d_floor as f64)) as u32 + 1);
        let mut total = 0;
        for n1 in 0..=bound {
            for n2 in 0..=n1 {
                if weyl_dim(diagram(n1, n2)) <= d_floor {
                    total += 1;
                }
            }
        }
        total
    }

    #[test]
    fn named_dimensions() {
        assert_eq!(weyl_dim(diagram(1, 0)), 3);
        assert_eq!(weyl_dim(diagram(0, 0)), 1);
        assert_eq!(weyl_dim(diagram(2, 1)), 8);
        assert!(YoungDiagram::new(1, 2).is_err());
    }

    #[test]
    fn cumulative_counts() {
        assert_eq!(count_irreps_upto(RealThreshold::from_twice(1).unwrap()), 0);
        assert_eq!(count_irreps_upto(RealThreshold::from_twice(7).unwrap()), 3);
        assert_eq!(count_irreps_upto(RealThreshold::from_twice(4001).unwrap()), cumulative_bruteforce(2000));
        let total: u64 = (1..=2000).map(xi_bruteforce).sum();
        assert_eq!(count_irreps_upto(RealThreshold::just_above(2000)), total);
    }

    #[test]
    fn cumulative_matches_oracle_on_integer_and_half_thresholds() {
        for twice in 1..=1200u64 {
            let t = RealThreshold::from_twice(twice).unwrap();
            assert_eq!(count_irreps_upto(t), cumulative_bruteforce(twice / 2), "2D = {twice}");
        }
    }

    #[test]
    fn xi_values() {
        assert_eq!(xi(2), 0);
        assert_eq!(xi(4), 0);
        assert_eq!(xi(5), 0);
        assert_eq!(xi(6), 2);
        assert_eq!(xi(15), 4);
        assert_eq!(xi_bruteforce(1), 1);
        assert_eq!(xi_bruteforce(3), 2);
        assert_eq!(xi_bruteforce(8), 1);
        assert_eq!(xi_bruteforce(15), 4);
    }

    #[test]
    fn boundary_thresholds_where_roots_are_integral() {
        // x^3 = 8D: D = 27 at x = 6, D = 125 at x = 10
        for d in [27u64, 64, 125, 216, 1000] {
            assert_eq!(xi(d), xi_bruteforce(d), "d = {d}");
            assert_eq!(count_irreps_upto(RealThreshold::from_twice(2 * d).unwrap()), cumulative_bruteforce(d));
        }
    }

    #[test]
    fn census_small() {
        let c = build_census(10);
        assert_eq!(c.support().collect::<Vec<_>>(), vec![1, 3, 6, 8, 10]);
        let c = build_census(1);
        assert_eq!(c.rows().collect::<Vec<_>>(), vec![(1, 1)]);
        let c = build_census(110);
        assert_eq!(c.total(), count_irreps_upto(RealThreshold::just_above(110)));
        assert!(c.closed_form_mismatches().is_empty());
        assert_eq!(c.count(0), None);
        assert_eq!(c.count(111), None);
    }

    #[test]
    fn census_prefix() {
        let c = build_census(21);
        assert_eq!(c.support().collect::<Vec<_>>(), vec![1, 3, 6, 8, 10, 15, 21]);
    }

    proptest! {
        #[test]
        fn conjugation_preserves_dimension(n1 in 0u32..2000, frac in 0.0f64..=1.0) {
            let n2 = (frac * n1 as f64) as u32;
            let d = diagram(n1, n2);
            prop_assert_eq!(weyl_dim(d), weyl_dim(d.conjugate()));
            prop_assert_eq!(d.conjugate().conjugate(), d);
        }

        #[test]
        fn self_conjugate_family(n in 0u32..1000) {
            let d = diagram(2 * n, n);
            prop_assert!(d.is_self_conjugate());
            prop_assert_eq!(d.conjugate(), d);
            prop_assert!(weyl_dim(d) >= 1);
        }

        #[test]
        fn cumulative_count_is_monotone(twice in 1u64..200_000) {
            let a = count_irreps_upto(RealThreshold::from_twice(twice).unwrap());
            let b = count_irreps_upto(RealThreshold::from_twice(twice + 1).unwrap());
            prop_assert!(a <= b);
        }

        #[test]
        fn closed_form_matches_scan(d in 1u64..100_000) {
            prop_assert_eq!(xi(d), xi_bruteforce(d));
        }
    }
}
