//! Integer partitions whose parts come from a fixed set.
//!
//! Partitions are always listed with nonincreasing parts, and streams
//! produce them in reverse lexicographic order. The enumerator holds one
//! partition at a time, so its memory is linear in `n` no matter how many
//! partitions there are.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

/// A set `H` of allowed parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartSet {
    /// Every positive integer.
    PositiveIntegers,
    /// Finitely many parts, stored ascending without duplicates.
    Finite(Vec<u32>),
}

/// Zero was offered as a part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZeroPart;

impl fmt::Display for ZeroPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("parts must be positive")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ZeroPart {}

impl PartSet {
    pub fn finite<I: IntoIterator<Item = u32>>(parts: I) -> Result<Self, ZeroPart> {
        let mut v: Vec<u32> = parts.into_iter().collect();
        if v.contains(&0) {
            return Err(ZeroPart);
        }
        v.sort_unstable();
        v.dedup();
        Ok(PartSet::Finite(v))
    }

    pub fn contains(&self, part: u32) -> bool {
        match self {
            PartSet::PositiveIntegers => part > 0,
            PartSet::Finite(v) => v.binary_search(&part).is_ok(),
        }
    }

    /// Members in `1..=bound`, ascending.
    pub fn members_upto(&self, bound: u32) -> Vec<u32> {
        match self {
            PartSet::PositiveIntegers => (1..=bound).collect(),
            PartSet::Finite(v) => v.iter().copied().take_while(|&p| p <= bound).collect(),
        }
    }

    /// This set with `part` removed.
    pub fn without(&self, part: u32) -> PartSet {
        match self {
            PartSet::PositiveIntegers => panic!("cannot remove from the unbounded part set"),
            PartSet::Finite(v) => PartSet::Finite(v.iter().copied().filter(|&p| p != part).collect()),
        }
    }
}

/// A partition with nonincreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

/// The offered parts were not nonincreasing or contained zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NotOrdered;

impl fmt::Display for NotOrdered {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("partition parts must be positive and nonincreasing")
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NotOrdered {}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self, NotOrdered> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(NotOrdered);
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn total(&self) -> u64 {
        self.parts.iter().map(|&p| p as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `part ∨ self`: prepends `part`, which must be at least the current
    /// first part.
    pub fn prepend(&self, part: u32) -> Result<Self, NotOrdered> {
        if part == 0 || self.parts.first().is_some_and(|&first| first > part) {
            return Err(NotOrdered);
        }
        let mut parts = Vec::with_capacity(self.parts.len() + 1);
        parts.push(part);
        parts.extend_from_slice(&self.parts);
        Ok(Self { parts })
    }

    pub fn to_shape(&self) -> PartitionShape {
        PartitionShape::from_parts(&self.parts)
    }
}

impl fmt::Display for Partition {
    /// Parts joined with `+`, e.g. `3+1+1+1`. The empty partition is `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("0");
        }
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Run-length form of a partition: distinct parts with their multiplicities,
/// parts strictly decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PartitionShape {
    entries: Vec<(u32, u32)>,
}

impl PartitionShape {
    /// Run-length encodes nonincreasing `parts`.
    pub fn from_parts(parts: &[u32]) -> Self {
        let mut entries: Vec<(u32, u32)> = Vec::new();
        for &p in parts {
            match entries.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => entries.push((p, 1)),
            }
        }
        Self { entries }
    }

    /// Builds a shape from `(part, multiplicity)` entries. Parts must be
    /// strictly decreasing and multiplicities positive.
    pub fn new(entries: Vec<(u32, u32)>) -> Result<Self, NotOrdered> {
        if entries.iter().any(|&(p, m)| p == 0 || m == 0) || entries.windows(2).any(|w| w[0].0 <= w[1].0) {
            return Err(NotOrdered);
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    /// Number of components, the sum of multiplicities.
    pub fn components(&self) -> u32 {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(p, m)| p as u64 * m as u64).sum()
    }

    pub fn has_part(&self, part: u32) -> bool {
        self.entries.iter().any(|&(p, _)| p == part)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Phase {
    Start,
    Running,
    Done,
}

/// Streaming enumerator of the partitions of `n` into parts from a set,
/// largest part bounded.
///
/// [`advance`](Self::advance) lends the current partition without
/// allocating; the [`Iterator`] impl clones it into an owned [`Partition`].
#[derive(Clone, Debug)]
pub struct RestrictedPartitions {
    allowed: Vec<u32>,
    chosen: Vec<usize>,
    parts: Vec<u32>,
    remaining: u64,
    phase: Phase,
    steps: u64,
}

impl RestrictedPartitions {
    pub fn new(n: u32, parts: &PartSet, max_part: u32) -> Self {
        Self {
            allowed: parts.members_upto(max_part.min(n)),
            chosen: Vec::new(),
            parts: Vec::new(),
            remaining: n as u64,
            phase: Phase::Start,
            steps: 0,
        }
    }

    fn push(&mut self, j: usize) {
        self.chosen.push(j);
        self.parts.push(self.allowed[j]);
        self.remaining -= self.allowed[j] as u64;
        self.steps += 1;
    }

    /// Completes the current prefix greedily with the largest admissible
    /// parts. Returns false on a dead end.
    fn fill(&mut self) -> bool {
        while self.remaining > 0 {
            let top = self.chosen.last().map_or(self.allowed.len(), |&j| j + 1);
            let fits = self.allowed[..top].partition_point(|&p| p as u64 <= self.remaining);
            if fits == 0 {
                return false;
            }
            self.push(fits - 1);
        }
        true
    }

    /// Replaces the deepest part that can still shrink with the next smaller
    /// allowed part, discarding everything after it.
    fn step_back(&mut self) -> bool {
        while let Some(j) = self.chosen.pop() {
            self.parts.pop();
            self.remaining += self.allowed[j] as u64;
            self.steps += 1;
            if j > 0 {
                self.push(j - 1);
                return true;
            }
        }
        false
    }

    /// Moves to the next partition and lends it out.
    pub fn advance(&mut self) -> Option<&[u32]> {
        loop {
            let moved = match self.phase {
                Phase::Done => return None,
                Phase::Start => {
                    self.phase = Phase::Running;
                    true
                }
                Phase::Running => self.step_back(),
            };
            if !moved {
                self.phase = Phase::Done;
                return None;
            }
            if self.fill() {
                return Some(&self.parts);
            }
        }
    }

    /// Number of push/pop moves made so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }
}

impl Iterator for RestrictedPartitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        self.advance().map(|p| Partition { parts: p.to_vec() })
    }
}

/// Partitions of `n` into parts from `parts`, each part at most `max_part`,
/// in reverse lexicographic order. `n = 0` yields the empty partition once.
pub fn enumerate_restricted(n: u32, parts: &PartSet, max_part: u32) -> RestrictedPartitions {
    RestrictedPartitions::new(n, parts, max_part)
}

/// Number of partitions of `n` into parts from `parts`, each at most
/// `max_part`, without enumerating them.
///
/// Table `ways[m]` after processing the first `j` allowed parts holds the
/// count keyed by `(m, j)`.
pub fn count_restricted(n: u32, parts: &PartSet, max_part: u32) -> BigUint {
    let mut ways = vec![BigUint::zero(); n as usize + 1];
    ways[0] = BigUint::one();
    for p in parts.members_upto(max_part.min(n)) {
        let p = p as usize;
        for m in p..=n as usize {
            let (head, tail) = ways.split_at_mut(m);
            tail[0] += &head[m - p];
        }
    }
    core::mem::take(&mut ways[n as usize])
}

/// `p(n)`, the number of unrestricted partitions, from Euler's pentagonal
/// number recurrence.
pub fn count_partitions_exact(n: u32) -> BigUint {
    let n = n as usize;
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for m in 1..=n {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[m - g1].clone();
            if g2 <= m {
                term += &p[m - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p.push(acc);
    }
    p.pop().unwrap().to_biguint().expect("partition counts are nonnegative")
}

/// Hardy–Ramanujan leading asymptotic `exp(pi * sqrt(2n/3)) / (4 n sqrt 3)`.
pub fn hardy_ramanujan_estimate(n: u32) -> f64 {
    let n = n as f64;
    libm::exp(core::f64::consts::PI * libm::sqrt(2.0 * n / 3.0)) / (4.0 * n * libm::sqrt(3.0))
}
