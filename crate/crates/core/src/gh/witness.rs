//! Partition and cover witnesses.
//!
//! A space lies in `M_{N,M}` when it has a partition into blocks of diameter
//! `< 1/N` such that distances realized between different pairs of blocks
//! differ by more than `1/M`. It lies in `M^N_M` (order bound `n`) when it has
//! a cover of mesh `< 1/N` in which, for every `n + 2` members, each member
//! stays more than `1/M` away from the intersection of the others.

use itertools::Itertools;

use super::GhError;
use crate::embed::{build_dendrogram, single_linkage_levels};
use crate::rational::{reciprocal, Rational};
use crate::space::{FiniteMetricSpace, Pair};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Membership in `M_{N,M}`.
    Injectivity,
    /// Membership in `M^N_M` with order bound `order`.
    Dimension { order: usize },
}

/// Candidate partitions a search looked at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    /// Horizontal cuts of clustering hierarchies; not every partition is reachable.
    DendrogramCuts,
    /// Supplied by the caller and only checked.
    Given,
}

impl SearchSpace {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchSpace::DendrogramCuts => "dendrogram-cuts",
            SearchSpace::Given => "given",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionWitness {
    /// Each block sorted, blocks ordered by smallest member.
    pub blocks: Vec<Vec<usize>>,
    /// Mesh parameter: every block has diameter `< 1/n`.
    pub n: u64,
    /// Separation parameter: gaps must exceed `1/m`.
    pub m: u64,
    pub kind: WitnessKind,
    pub search_space: SearchSpace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessViolation {
    /// A block or cover member with diameter `>= 1/N`.
    Mesh { block: usize, diameter: Rational },
    /// Two pairs realized between different block pairs whose distances
    /// differ by at most `1/M`. The pair with the smallest gap is reported.
    Separation { first: Pair, second: Pair, gap: Rational },
    /// `member` of the subfamily `family` comes within `distance <= 1/M` of
    /// the intersection of the other members.
    Overlap { family: Vec<usize>, member: usize, distance: Rational },
}

fn check_points(space: &FiniteMetricSpace, sets: &[Vec<usize>]) -> Result<(), GhError> {
    for &p in sets.iter().flatten() {
        if p >= space.len() {
            return Err(GhError::PointOutOfRange {
                point: p,
                len: space.len(),
            });
        }
    }
    Ok(())
}

fn validate_partition(space: &FiniteMetricSpace, blocks: &[Vec<usize>]) -> Result<Vec<usize>, GhError> {
    check_points(space, blocks)?;
    let mut owner = vec![usize::MAX; space.len()];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(GhError::NotAPartition(format!("block {b} is empty")));
        }
        for &p in block {
            if owner[p] != usize::MAX {
                return Err(GhError::NotAPartition(format!(
                    "point {p} is in blocks {} and {b}",
                    owner[p]
                )));
            }
            owner[p] = b;
        }
    }
    if let Some(p) = owner.iter().position(|&o| o == usize::MAX) {
        return Err(GhError::NotAPartition(format!("point {p} is in no block")));
    }
    Ok(owner)
}

fn validate_cover(space: &FiniteMetricSpace, cover: &[Vec<usize>]) -> Result<(), GhError> {
    check_points(space, cover)?;
    let mut seen = vec![false; space.len()];
    for &p in cover.iter().flatten() {
        seen[p] = true;
    }
    match seen.iter().position(|s| !s) {
        Some(missing) => Err(GhError::NotACover { missing }),
        None => Ok(()),
    }
}

fn mesh_violation(space: &FiniteMetricSpace, sets: &[Vec<usize>], n: u64) -> Option<WitnessViolation> {
    let cap = reciprocal(n);
    sets.iter().enumerate().find_map(|(block, s)| {
        let diameter = space.subset_diameter(s);
        (diameter >= cap).then_some(WitnessViolation::Mesh { block, diameter })
    })
}

/// Checks a partition against `M_{N,M}`. `Ok(None)` means it is a witness.
///
/// Cross-block distances are sorted together with their unordered block
/// pair; the closest two values with different block pairs are adjacent in
/// that order, so one sweep finds the smallest offending gap.
pub fn check_mnm(
    space: &FiniteMetricSpace,
    partition: &[Vec<usize>],
    n: u64,
    m: u64,
) -> Result<Option<WitnessViolation>, GhError> {
    let owner = validate_partition(space, partition)?;
    if let Some(v) = mesh_violation(space, partition, n) {
        return Ok(Some(v));
    }
    let mut cross: Vec<(&Rational, (usize, usize), Pair)> = space
        .pairs()
        .filter(|&(i, j)| owner[i] != owner[j])
        .map(|(i, j)| {
            let (a, b) = (owner[i].min(owner[j]), owner[i].max(owner[j]));
            (space.dist(i, j), (a, b), (i, j))
        })
        .collect();
    cross.sort();
    let limit = reciprocal(m);
    let mut worst: Option<WitnessViolation> = None;
    let mut worst_gap: Option<Rational> = None;
    for w in cross.windows(2) {
        if w[0].1 == w[1].1 {
            continue;
        }
        let gap = w[1].0 - w[0].0;
        if gap <= limit && worst_gap.as_ref().is_none_or(|g| &gap < g) {
            worst_gap = Some(gap.clone());
            worst = Some(WitnessViolation::Separation {
                first: w[0].2,
                second: w[1].2,
                gap,
            });
        }
    }
    Ok(worst)
}

/// First cut of a clustering hierarchy, coarsest first, that witnesses
/// `M_{N,M}`.
///
/// Candidates are the cuts of [`build_dendrogram`] below `1/N` and below
/// each smaller node diameter, every single-linkage level of mesh `< 1/N`,
/// and a two-block split when one exists. A two-block partition has a
/// single block pair, so separation holds vacuously, and one with mesh
/// `< 1/N` exists exactly when the graph of pairs at distance `>= 1/N` is
/// bipartite. Candidates are tried by increasing number of blocks. `None`
/// only says that no candidate works; some partition with three or more
/// blocks might.
pub fn find_mnm_partition(space: &FiniteMetricSpace, n: u64, m: u64) -> Option<PartitionWitness> {
    let cap = reciprocal(n);
    let tree = build_dendrogram(space);
    let mut candidates: Vec<Vec<Vec<usize>>> = std::iter::once(cap.clone())
        .chain(
            tree.diameters()
                .into_iter()
                .filter(|d| d < &cap && d > &Rational::default()),
        )
        .map(|t| canonical(tree.cut_below(&t)))
        .collect();
    candidates.extend(
        single_linkage_levels(space)
            .into_iter()
            .map(canonical)
            .filter(|blocks| blocks.iter().all(|b| space.subset_diameter(b) < cap)),
    );
    candidates.extend(two_block_split(space, &cap));
    // Stable: dendrogram cuts stay ahead of single-linkage levels on ties.
    candidates.sort_by_key(Vec::len);
    candidates.dedup();
    let mut tried: Vec<&Vec<Vec<usize>>> = Vec::new();
    for blocks in &candidates {
        if tried.contains(&blocks) {
            continue;
        }
        tried.push(blocks);
        if check_mnm(space, blocks, n, m).expect("cuts are partitions").is_none() {
            return Some(PartitionWitness {
                blocks: blocks.clone(),
                n,
                m,
                kind: WitnessKind::Injectivity,
                search_space: SearchSpace::DendrogramCuts,
            });
        }
    }
    None
}

/// Two blocks of diameter `< cap`, by 2-colouring the pairs at distance
/// `>= cap`. Each component's smallest point goes to the first colour.
fn two_block_split(space: &FiniteMetricSpace, cap: &Rational) -> Option<Vec<Vec<usize>>> {
    let n = space.len();
    if n < 2 {
        return None;
    }
    let mut colour: Vec<Option<bool>> = vec![None; n];
    for start in 0..n {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut stack = vec![start];
        while let Some(p) = stack.pop() {
            let c = colour[p].expect("coloured before push");
            for q in 0..n {
                if q == p || space.dist(p, q) < cap {
                    continue;
                }
                match colour[q] {
                    None => {
                        colour[q] = Some(!c);
                        stack.push(q);
                    }
                    Some(cq) if cq == c => return None,
                    Some(_) => {}
                }
            }
        }
    }
    let (a, b): (Vec<usize>, Vec<usize>) = (0..n).partition(|&p| colour[p] == Some(false));
    if b.is_empty() {
        // Everything fits in one block; move the last point out.
        let mut a = a;
        let last = a.pop().expect("n >= 2");
        return Some(vec![a, vec![last]]);
    }
    Some(canonical(vec![a, b]))
}

fn canonical(mut blocks: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for b in &mut blocks {
        b.sort_unstable();
    }
    blocks.sort();
    blocks
}

/// Largest `k` such that some `k + 1` members share a point; `-1` for the
/// empty space.
pub fn cover_order(space: &FiniteMetricSpace, cover: &[Vec<usize>]) -> Result<i64, GhError> {
    validate_cover(space, cover)?;
    let mut count = vec![0i64; space.len()];
    for set in cover {
        for &p in set.iter().unique() {
            count[p] += 1;
        }
    }
    Ok(count.into_iter().max().map_or(-1, |c| c - 1))
}

/// Checks a cover against `M^N_M` with order bound `order`. `Ok(None)`
/// means it is a witness.
///
/// For every `order + 2` members `V` and every `U` in `V`, the distance from
/// `U` to the intersection of `V \ {U}` must exceed `1/M`; an empty
/// intersection passes.
pub fn check_dimension_witness(
    space: &FiniteMetricSpace,
    cover: &[Vec<usize>],
    n: u64,
    m: u64,
    order: usize,
) -> Result<Option<WitnessViolation>, GhError> {
    validate_cover(space, cover)?;
    if let Some(v) = mesh_violation(space, cover, n) {
        return Ok(Some(v));
    }
    let limit = reciprocal(m);
    let members: Vec<Vec<bool>> = cover
        .iter()
        .map(|set| {
            let mut mask = vec![false; space.len()];
            set.iter().for_each(|&p| mask[p] = true);
            mask
        })
        .collect();
    for family in (0..cover.len()).combinations(order + 2) {
        for &u in &family {
            let common: Vec<usize> = (0..space.len())
                .filter(|&p| family.iter().all(|&v| v == u || members[v][p]))
                .collect();
            let closest = cover[u]
                .iter()
                .flat_map(|&x| common.iter().map(move |&y| (x, y)))
                .map(|(x, y)| space.dist(x, y))
                .min();
            if let Some(distance) = closest {
                if distance <= &limit {
                    return Ok(Some(WitnessViolation::Overlap {
                        family,
                        member: u,
                        distance: distance.clone(),
                    }));
                }
            }
        }
    }
    Ok(None)
}
