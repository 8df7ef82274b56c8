//! Loose embedding into the real line for spaces with injective distances.
//!
//! Each dendrogram node owns a closed interval. The children of a node get
//! disjoint sub-intervals, shorter than every gap between siblings, so all
//! distances realized inside a child are smaller than any distance between
//! two of its siblings. For each pair of siblings the realized distances
//! fill an interval `[gap, span]`; placements are resampled until these
//! intervals are pairwise disjoint and disjoint from every interval already
//! committed elsewhere in the tree. Every pair of points is then separated at
//! exactly one node, through one pair of siblings, and the image distances
//! come out pairwise distinct. Each leaf sits at the simplest rational of
//! its interval.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{build_dendrogram, verify_loose, EmbedError, Embedding, Verification};
use crate::pattern::is_injective;
use crate::rational::{int, ratio, simplest_between, Rational};
use crate::space::FiniteMetricSpace;

/// Placement attempts per dendrogram node.
pub const DEFAULT_RETRY_BUDGET: usize = 64;

/// Grid resolution for sampled interval positions, relative to the parent length.
const GRID_BITS: u32 = 32;

pub fn embed_line_branching(space: &FiniteMetricSpace, seed: u64) -> Result<Embedding, EmbedError> {
    embed_line_branching_with(space, seed, DEFAULT_RETRY_BUDGET)
}

pub fn embed_line_branching_with(
    space: &FiniteMetricSpace,
    seed: u64,
    retry_budget: usize,
) -> Result<Embedding, EmbedError> {
    is_injective(space).map_err(EmbedError::NotInjective)?;
    let n = space.len();
    let tree = build_dendrogram(space);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut intervals: Vec<Option<(Rational, Rational)>> = vec![None; tree.len()];
    if !tree.is_empty() {
        intervals[0] = Some((int(0), int(1)));
    }
    let mut committed: Vec<(Rational, Rational)> = Vec::new();
    for (id, node) in tree.nodes().iter().enumerate() {
        if node.is_leaf() {
            continue;
        }
        let parent = intervals[id].clone().expect("parents are placed first");
        let (children, spans) = (0..retry_budget)
            .find_map(|_| {
                let children = sample_children(&mut rng, &parent, node.children.len(), &committed)?;
                let spans = sibling_spans(&children);
                generic(&spans, &committed).then_some((children, spans))
            })
            .ok_or(EmbedError::GenericityExhausted { node: id })?;
        committed.extend(spans);
        for (&child, interval) in node.children.iter().zip(children) {
            intervals[child] = Some(interval);
        }
    }

    let mut coords = vec![Vec::new(); n];
    for (id, node) in tree.nodes().iter().enumerate() {
        if node.is_leaf() {
            let (lo, hi) = intervals[id].as_ref().expect("every node is placed");
            coords[node.points[0]] = vec![simplest_between(lo, hi)];
        }
    }
    let emb = verify_loose(space, &Embedding::new(1, coords))?;
    match emb.verified {
        Verification::Violated(v) => Err(EmbedError::VerificationFailed(v)),
        _ => Ok(emb),
    }
}

/// Random disjoint sub-intervals of `parent`, one per child, in child order.
///
/// Centres are drawn from a grid in the middle three quarters of the parent.
/// Lengths are capped by a third of the closest centre gap and by
/// `len / (4k)`, so every sibling gap exceeds every sibling length. They are
/// also capped by a quarter of the smallest difference between two centre
/// distances and by half the distance from any centre distance to a committed
/// range, which keeps all distance ranges disjoint. Returns `None` when two
/// centre distances coincide or one falls inside a committed range.
fn sample_children(
    rng: &mut ChaCha8Rng,
    parent: &(Rational, Rational),
    k: usize,
    committed: &[(Rational, Rational)],
) -> Option<Vec<(Rational, Rational)>> {
    let (lo, hi) = parent;
    let len = hi - lo;
    let steps = Rational::from_integer(BigInt::from(1u64 << GRID_BITS));
    let mut centers: Vec<Rational> = (0..k)
        .map(|_| {
            let u = Rational::from_integer(BigInt::from(rng.random_range(0..=1u64 << GRID_BITS)));
            lo + &len * ratio(1, 8) + &len * ratio(3, 4) * u / &steps
        })
        .collect();
    centers.sort();
    let min_gap = centers.windows(2).map(|w| &w[1] - &w[0]).min()?;
    if min_gap == Rational::default() {
        return None;
    }
    let mut cap = std::cmp::min(min_gap * ratio(1, 3), &len / int(4 * k as i64));
    let mut deltas: Vec<Rational> = Vec::with_capacity(k * (k - 1) / 2);
    for (a, ca) in centers.iter().enumerate() {
        for cb in &centers[a + 1..] {
            deltas.push(cb - ca);
        }
    }
    deltas.sort();
    for w in deltas.windows(2) {
        let d = &w[1] - &w[0];
        if d == Rational::default() {
            return None;
        }
        cap = cap.min(d * ratio(1, 4));
    }
    for d in &deltas {
        for (clo, chi) in committed {
            if clo <= d && d <= chi {
                return None;
            }
            let away = if d < clo { clo - d } else { d - chi };
            cap = cap.min(away * ratio(1, 2));
        }
    }
    centers.shuffle(rng);
    let intervals = centers
        .into_iter()
        .map(|c| {
            let u = Rational::from_integer(BigInt::from(rng.random_range(0..=1u64 << GRID_BITS)));
            // Length in [cap/2, cap].
            let half = &cap * (ratio(1, 2) + u / &steps * ratio(1, 2)) * ratio(1, 2);
            (&c - &half, &c + &half)
        })
        .collect();
    Some(intervals)
}

/// Range of distances between points of two disjoint intervals, per sibling pair.
fn sibling_spans(children: &[(Rational, Rational)]) -> Vec<(Rational, Rational)> {
    let mut spans = Vec::new();
    for (a, ia) in children.iter().enumerate() {
        for ib in &children[a + 1..] {
            let (left, right) = if ia.0 < ib.0 { (ia, ib) } else { (ib, ia) };
            spans.push((&right.0 - &left.1, &right.1 - &left.0));
        }
    }
    spans
}

fn overlaps(a: &(Rational, Rational), b: &(Rational, Rational)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

fn generic(spans: &[(Rational, Rational)], committed: &[(Rational, Rational)]) -> bool {
    spans.iter().enumerate().all(|(i, s)| {
        spans[i + 1..].iter().all(|t| !overlaps(s, t)) && committed.iter().all(|c| !overlaps(s, c))
    })
}
