//! Exact Gromov-Hausdorff distance by branch-and-bound over correspondences.
//!
//! Every correspondence contains one of the form `f ∪ g^T` with `f: X -> Y`
//! and `g` defined on the points `f` misses, and removing pairs never raises
//! distortion. The first pass therefore searches maps `f` (X points by
//! decreasing eccentricity) followed by preimages for uncovered `Y` points,
//! pruning on the partial distortion and a one-step lookahead over the
//! unassigned `X` points. The incumbent starts at the best greedy
//! correspondence and only strict improvements are kept.
//!
//! The second pass fixes the optimum `v` and finds the lexicographically
//! smallest correspondence (as a sorted list of pairs) with distortion `v`,
//! so the reported witness does not depend on search order.
//!
//! All distortion values are rank-compressed to `u32` up front; the search
//! itself never touches a rational.

use super::bounds::{assert_nonempty_pair, best_greedy, eccentricity_order, lower_bound};
use super::{Correspondence, GhResult, Proof};
use crate::rational::{abs_diff, ratio, Rational};
use crate::space::FiniteMetricSpace;

/// Default node budget for [`gh_exact`].
pub const DEFAULT_GH_BUDGET: u64 = 20_000_000;

/// Largest `|X| * |Y|` for which the cost table is built.
const MAX_PRODUCT: usize = 2_500;

/// `d_GH(X, Y)`, exactly when the search fits in `budget` nodes.
///
/// When the budget runs out the result carries a [`Proof::Bounds`] with the
/// best correspondence found as the upper end. Both spaces must be nonempty,
/// or both empty.
pub fn gh_exact(x: &FiniteMetricSpace, y: &FiniteMetricSpace, budget: u64) -> GhResult {
    assert_nonempty_pair(x, y);
    let lower = lower_bound(x, y);
    let (greedy_dis, greedy) = best_greedy(x, y);
    if x.is_empty() {
        return GhResult {
            value: Rational::default(),
            correspondence: greedy,
            proof: Proof::Exact,
        };
    }
    if x.len() * y.len() > MAX_PRODUCT {
        let upper = greedy_dis * ratio(1, 2);
        return GhResult {
            value: upper.clone(),
            correspondence: greedy,
            proof: Proof::Bounds { lower, upper },
        };
    }

    let table = CostTable::new(x, y);
    let greedy_rank = table.rank(&greedy_dis);
    let lower_rank = table.rank_at_least(&(&lower * ratio(2, 1)));
    let mut search = Search {
        table: &table,
        nodes: budget,
        exhausted: false,
        pairs: Vec::with_capacity(x.len() + y.len()),
        incumbent: greedy_rank,
        best: None,
        floor: lower_rank,
        x_order: eccentricity_order(x),
    };
    if greedy_rank > lower_rank {
        let mut covered = vec![0u32; y.len()];
        search.assign_x(0, 0, &mut covered);
    }
    let optimum = search.incumbent;
    let found = search
        .best
        .take()
        .map(|mut p| {
            p.sort_unstable();
            Correspondence::from_sorted(p)
        })
        .unwrap_or(greedy);
    if search.exhausted {
        let upper = table.values[optimum as usize].clone() * ratio(1, 2);
        return GhResult {
            value: upper.clone(),
            correspondence: found,
            proof: Proof::Bounds { lower, upper },
        };
    }

    let mut tie = TieBreak {
        table: &table,
        limit: optimum,
        nodes: budget,
        pairs: Vec::new(),
        covered: vec![0; y.len()],
    };
    let correspondence = if tie.extend(0, 0, 0) {
        Correspondence::from_sorted(tie.pairs)
    } else {
        // Out of budget: the first-pass witness is still optimal.
        found
    };
    GhResult {
        value: table.values[optimum as usize].clone() * ratio(1, 2),
        correspondence,
        proof: Proof::Exact,
    }
}

struct CostTable {
    nx: usize,
    ny: usize,
    /// Distinct values of `|d_X(a, c) - d_Y(b, d)|`, ascending.
    values: Vec<Rational>,
    ranks: Vec<u32>,
}

impl CostTable {
    fn new(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Self {
        let (nx, ny) = (x.len(), y.len());
        let mut raw = Vec::with_capacity(nx * nx * ny * ny);
        for a in 0..nx {
            for c in 0..nx {
                for b in 0..ny {
                    for d in 0..ny {
                        raw.push(abs_diff(x.dist(a, c), y.dist(b, d)));
                    }
                }
            }
        }
        let mut values = raw.clone();
        values.sort();
        values.dedup();
        let ranks = raw
            .iter()
            .map(|v| values.binary_search(v).expect("present") as u32)
            .collect();
        CostTable {
            nx,
            ny,
            values,
            ranks,
        }
    }

    #[inline]
    fn cost(&self, a: usize, c: usize, b: usize, d: usize) -> u32 {
        self.ranks[((a * self.nx + c) * self.ny + b) * self.ny + d]
    }

    fn rank(&self, v: &Rational) -> u32 {
        self.values.binary_search(v).expect("distortion is a table value") as u32
    }

    /// Rank of the smallest table value `>= v`.
    fn rank_at_least(&self, v: &Rational) -> u32 {
        self.values.partition_point(|w| w < v) as u32
    }

    /// Largest cost of adding `(a, b)` next to `pairs`.
    #[inline]
    fn extension(&self, pairs: &[(usize, usize)], a: usize, b: usize) -> u32 {
        pairs
            .iter()
            .map(|&(c, d)| self.cost(a, c, b, d))
            .max()
            .unwrap_or(0)
    }
}

struct Search<'a> {
    table: &'a CostTable,
    nodes: u64,
    exhausted: bool,
    pairs: Vec<(usize, usize)>,
    incumbent: u32,
    best: Option<Vec<(usize, usize)>>,
    /// Rank of the lower bound; reaching it ends the search.
    floor: u32,
    x_order: Vec<usize>,
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        if self.exhausted || self.incumbent <= self.floor {
            return false;
        }
        if self.nodes == 0 {
            self.exhausted = true;
            return false;
        }
        self.nodes -= 1;
        true
    }

    fn assign_x(&mut self, k: usize, bound: u32, covered: &mut [u32]) {
        if !self.tick() {
            return;
        }
        let t = self.table;
        if k == self.x_order.len() {
            self.assign_y(0, bound, covered);
            return;
        }
        // Lookahead: every unassigned X point must land somewhere.
        for &a in &self.x_order[k + 1..] {
            let cheapest = (0..t.ny)
                .map(|b| t.extension(&self.pairs, a, b))
                .min()
                .unwrap_or(0);
            if cheapest.max(bound) >= self.incumbent {
                return;
            }
        }
        let a = self.x_order[k];
        let mut options: Vec<(u32, usize)> = (0..t.ny)
            .map(|b| (t.extension(&self.pairs, a, b).max(bound), b))
            .filter(|&(e, _)| e < self.incumbent)
            .collect();
        options.sort_unstable();
        for (e, b) in options {
            if e >= self.incumbent {
                break;
            }
            self.pairs.push((a, b));
            covered[b] += 1;
            self.assign_x(k + 1, e, covered);
            covered[b] -= 1;
            self.pairs.pop();
        }
    }

    fn assign_y(&mut self, from: usize, bound: u32, covered: &mut [u32]) {
        let t = self.table;
        let Some(b) = (from..t.ny).find(|&b| covered[b] == 0) else {
            if bound < self.incumbent {
                self.incumbent = bound;
                self.best = Some(self.pairs.clone());
            }
            return;
        };
        if !self.tick() {
            return;
        }
        let mut options: Vec<(u32, usize)> = (0..t.nx)
            .map(|a| (t.extension(&self.pairs, a, b).max(bound), a))
            .filter(|&(e, _)| e < self.incumbent)
            .collect();
        options.sort_unstable();
        for (e, a) in options {
            if e >= self.incumbent {
                break;
            }
            self.pairs.push((a, b));
            covered[b] += 1;
            self.assign_y(b + 1, e, covered);
            covered[b] -= 1;
            self.pairs.pop();
        }
    }
}

/// Depth-first search for the lexicographically smallest correspondence
/// with distortion rank at most `limit`.
///
/// Pairs are generated in sorted order: point `i` of `X` receives an
/// increasing run of `Y` points before point `i + 1` starts. Extending a run
/// always sorts before closing it, except on the last `X` point, where the
/// list ends.
struct TieBreak<'a> {
    table: &'a CostTable,
    limit: u32,
    nodes: u64,
    pairs: Vec<(usize, usize)>,
    covered: Vec<u32>,
}

impl TieBreak<'_> {
    /// Extends the run of `X` point `i`, whose next element is at least `from`
    /// and which currently holds `run` pairs. Returns true once complete.
    fn extend(&mut self, i: usize, from: usize, run: usize) -> bool {
        if self.nodes == 0 {
            return false;
        }
        self.nodes -= 1;
        let t = self.table;
        let last = i + 1 == t.nx;
        if last && run > 0 && self.covered.iter().all(|&c| c > 0) {
            return true;
        }
        for j in from..t.ny {
            if t.extension(&self.pairs, i, j) <= self.limit {
                self.pairs.push((i, j));
                self.covered[j] += 1;
                if self.extend(i, j + 1, run + 1) {
                    return true;
                }
                self.covered[j] -= 1;
                self.pairs.pop();
                if self.nodes == 0 {
                    return false;
                }
            }
        }
        !last && run > 0 && self.extend(i + 1, 0, 0)
    }
}
