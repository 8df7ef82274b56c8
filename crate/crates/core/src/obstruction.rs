//! Equidistant subsets and the dimension bound they imply.
//!
//! `R^d` holds at most `d + 1` pairwise equidistant points. A loose embedding
//! maps an equidistant set to an equidistant set, so a space containing `k`
//! equidistant points has no loose embedding into `R^d` for `d < k - 1`.
//!
//! The largest equidistant set is a maximum clique in one of the
//! "same-distance graphs", one per distance class of the pattern.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use thiserror::Error;

use crate::pattern::{distance_pattern, PatternBlock};
use crate::rational::Rational;
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error("need at least two points, got {0}")]
    TooSmall(usize),
}

/// A set of at least two pairwise equidistant points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexWitness {
    /// Point indices in increasing order.
    pub points: Vec<usize>,
    pub side: Rational,
}

impl SimplexWitness {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Dimension of the simplex, one less than its vertex count.
    pub fn dimension(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn holds_in(&self, space: &FiniteMetricSpace) -> bool {
        self.points.len() >= 2
            && self.points.iter().enumerate().all(|(a, &i)| {
                self.points[a + 1..]
                    .iter()
                    .all(|&j| space.dist(i, j) == &self.side)
            })
    }
}

/// Largest equidistant subset.
///
/// Ties go to the smaller side length, then to the lexicographically
/// smallest point set.
pub fn max_regular_simplex(space: &FiniteMetricSpace) -> Result<SimplexWitness, ObstructionError> {
    let n = space.len();
    if n < 2 {
        return Err(ObstructionError::TooSmall(n));
    }
    let pattern = distance_pattern(space);
    if pattern.len() == 1 {
        return Ok(SimplexWitness {
            points: (0..n).collect(),
            side: pattern.blocks()[0].value.clone(),
        });
    }

    let mut classes: Vec<(usize, &PatternBlock)> = pattern
        .blocks()
        .iter()
        .map(|b| (clique_size_bound(b), b))
        .collect();
    classes.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.value.cmp(&b.1.value)));

    // Every class holds an edge, so two points are always available.
    let incumbent = AtomicUsize::new(2);
    let found: Vec<(usize, &PatternBlock, Vec<usize>)> = classes
        .par_iter()
        .filter_map(|&(bound, block)| {
            let floor = incumbent.load(Ordering::Relaxed);
            if bound < floor {
                return None;
            }
            let clique = max_clique_in_class(block, floor)?;
            incumbent.fetch_max(clique.len(), Ordering::Relaxed);
            Some((clique.len(), block, clique))
        })
        .collect();

    let (_, block, points) = found
        .into_iter()
        .min_by(|a, b| {
            b.0.cmp(&a.0)
                .then_with(|| a.1.value.cmp(&b.1.value))
                .then_with(|| a.2.cmp(&b.2))
        })
        .expect("the smallest class always yields a pair");
    Ok(SimplexWitness {
        points,
        side: block.value.clone(),
    })
}

/// `dim R^m` below which no loose embedding can exist: the size of the largest
/// equidistant set minus one. Zero for spaces with fewer than two points.
pub fn dim_lower_bound(space: &FiniteMetricSpace) -> usize {
    max_regular_simplex(space).map_or(0, |w| w.dimension())
}

/// Upper bound on a clique inside one class from its vertex and edge counts.
fn clique_size_bound(block: &PatternBlock) -> usize {
    let edges = block.pairs.len();
    let mut vertices: Vec<usize> = block.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    // Largest k with k(k-1)/2 <= edges.
    let mut k = 1;
    while (k + 1) * k / 2 <= edges {
        k += 1;
    }
    k.min(vertices.len())
}

/// Lexicographically smallest maximum clique of the class graph, provided it
/// has at least `floor` vertices. Returned as global point indices.
fn max_clique_in_class(block: &PatternBlock, floor: usize) -> Option<Vec<usize>> {
    let mut vertices: Vec<usize> = block.pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
    vertices.sort_unstable();
    vertices.dedup();
    let local = |p: usize| vertices.binary_search(&p).expect("vertex of the class");
    let m = vertices.len();
    let mut adj = vec![vec![false; m]; m];
    for &(i, j) in &block.pairs {
        let (a, b) = (local(i), local(j));
        adj[a][b] = true;
        adj[b][a] = true;
    }
    let mut search = CliqueSearch {
        adj: &adj,
        floor,
        best: None,
    };
    let mut clique = Vec::new();
    search.expand(&mut clique, (0..m).collect());
    search
        .best
        .map(|c| c.into_iter().map(|v| vertices[v]).collect())
}

struct CliqueSearch<'a> {
    adj: &'a [Vec<bool>],
    floor: usize,
    best: Option<Vec<usize>>,
}

impl CliqueSearch<'_> {
    fn target(&self) -> usize {
        self.best.as_ref().map_or(self.floor, |b| b.len() + 1)
    }

    /// Candidates are kept in increasing order, so cliques are visited in
    /// lexicographic order and the first one of maximum size is kept.
    fn expand(&mut self, clique: &mut Vec<usize>, candidates: Vec<usize>) {
        if candidates.is_empty() {
            if clique.len() >= self.target() {
                self.best = Some(clique.clone());
            }
            return;
        }
        if clique.len() + self.color_bound(&candidates) < self.target() {
            return;
        }
        for (idx, &v) in candidates.iter().enumerate() {
            if clique.len() + (candidates.len() - idx) < self.target() {
                return;
            }
            let next: Vec<usize> = candidates[idx + 1..]
                .iter()
                .copied()
                .filter(|&u| self.adj[v][u])
                .collect();
            clique.push(v);
            self.expand(clique, next);
            clique.pop();
        }
    }

    /// Number of colours in a greedy colouring; bounds any clique in `vs`.
    fn color_bound(&self, vs: &[usize]) -> usize {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in vs {
            match classes
                .iter_mut()
                .find(|class| class.iter().all(|&u| !self.adj[v][u]))
            {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes.len()
    }
}
