//! Distance-equality patterns.
//!
//! A loose embedding must carry equal distances to equal distances and
//! distinct ones to distinct ones, so the partition of point pairs by
//! distance value is the combinatorial invariant everything else works with.

use crate::rational::Rational;
use crate::space::{FiniteMetricSpace, Pair};

/// How distances are compared when grouping pairs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Comparison {
    /// Exact rational equality.
    #[default]
    Exact,
    /// Single linkage on the sorted distance list: consecutive values whose
    /// gap is at most the tolerance share a class.
    Tolerance(Rational),
}

/// One equality class of point pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternBlock {
    /// Smallest distance in the class (the only one in exact mode).
    pub value: Rational,
    /// Member pairs, sorted lexicographically.
    pub pairs: Vec<Pair>,
}

/// Partition of all unordered pairs into distance classes, sorted by value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistancePattern {
    points: usize,
    blocks: Vec<PatternBlock>,
    /// Block index per pair, indexed like [`pair_index`].
    block_of: Vec<usize>,
}

/// Position of `(i, j)`, `i < j`, in the lexicographic list of pairs of `n` points.
#[inline]
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

impl DistancePattern {
    pub fn blocks(&self) -> &[PatternBlock] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Index of the block holding the pair `{i, j}` (`i != j`).
    pub fn block_of(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        self.block_of[pair_index(self.points, a, b)]
    }

    pub fn is_injective(&self) -> bool {
        self.blocks.iter().all(|b| b.pairs.len() == 1)
    }

    /// Block sizes, largest first.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(|b| b.pairs.len()).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }
}

pub fn distance_pattern(space: &FiniteMetricSpace) -> DistancePattern {
    distance_pattern_with(space, &Comparison::Exact)
}

pub fn distance_pattern_with(space: &FiniteMetricSpace, mode: &Comparison) -> DistancePattern {
    let n = space.len();
    let mut pairs: Vec<Pair> = space.pairs().collect();
    // Stable sort keeps pairs lexicographic inside each distance value.
    pairs.sort_by(|a, b| space.dist(a.0, a.1).cmp(space.dist(b.0, b.1)));

    let mut blocks: Vec<PatternBlock> = Vec::new();
    let mut last: Option<&Rational> = None;
    for &(i, j) in &pairs {
        let d = space.dist(i, j);
        let joins = match (last, mode) {
            (None, _) => false,
            (Some(prev), Comparison::Exact) => prev == d,
            (Some(prev), Comparison::Tolerance(tol)) => &(d - prev) <= tol,
        };
        if joins {
            blocks.last_mut().expect("open block").pairs.push((i, j));
        } else {
            blocks.push(PatternBlock {
                value: d.clone(),
                pairs: vec![(i, j)],
            });
        }
        last = Some(d);
    }
    let mut block_of = vec![0; pairs.len()];
    for (b, block) in blocks.iter_mut().enumerate() {
        block.pairs.sort_unstable();
        for &(i, j) in &block.pairs {
            block_of[pair_index(n, i, j)] = b;
        }
    }
    DistancePattern {
        points: n,
        blocks,
        block_of,
    }
}

/// Two distinct pairs at the same distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Collision {
    pub first: Pair,
    pub second: Pair,
}

/// Checks whether all off-diagonal distances are distinct.
///
/// Returns `Err` with the lexicographically smallest colliding pair of
/// pairs when they are not.
pub fn is_injective(space: &FiniteMetricSpace) -> Result<(), Collision> {
    match injectivity_witness(&distance_pattern(space)) {
        Some(c) => Err(c),
        None => Ok(()),
    }
}

pub fn injectivity_witness(pattern: &DistancePattern) -> Option<Collision> {
    pattern
        .blocks
        .iter()
        .filter(|b| b.pairs.len() > 1)
        .map(|b| Collision {
            first: b.pairs[0],
            second: b.pairs[1],
        })
        .min_by_key(|c| (c.first, c.second))
}
