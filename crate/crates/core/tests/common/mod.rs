//! Brute-force oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use loometric::rational::{abs_diff, int, ratio, Rational};
use loometric::random::{banded_integer_space, hypercube_space, rationalized_euclidean};
use loometric::{Embedding, FiniteMetricSpace, SimplexWitness};
use rand::Rng;

pub fn space(rows: &[&[i64]]) -> FiniteMetricSpace {
    FiniteMetricSpace::from_matrix(
        rows.iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect(),
    )
    .expect("fixture is a metric")
}

/// A small random space, drawn from a few generators with many ties.
pub fn small_space<R: Rng>(rng: &mut R, n: usize) -> FiniteMetricSpace {
    match rng.random_range(0..3) {
        0 => {
            let lo = rng.random_range(1..=3);
            banded_integer_space(rng, n, lo)
        }
        1 => {
            let points: Vec<Vec<f64>> = (0..n)
                .map(|_| vec![rng.random::<f64>(), rng.random::<f64>()])
                .collect();
            rationalized_euclidean(&points, 8)
        }
        _ => hypercube_space(rng, n, 2),
    }
}

/// Minimal distortion over every relation covering both sides, and the
/// lexicographically smallest relation (as a sorted pair list) attaining it.
pub fn gh_by_relations(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> (Rational, Vec<(usize, usize)>) {
    let (nx, ny) = (x.len(), y.len());
    let cells: Vec<(usize, usize)> = (0..nx).flat_map(|a| (0..ny).map(move |b| (a, b))).collect();
    let k = cells.len();
    assert!(k <= 20, "relation enumeration is exponential");
    let mut values: Vec<Rational> = Vec::new();
    for &(a, b) in &cells {
        for &(c, d) in &cells {
            values.push(abs_diff(x.dist(a, c), y.dist(b, d)));
        }
    }
    let mut sorted = values.clone();
    sorted.sort();
    sorted.dedup();
    let rank: Vec<usize> = values.iter().map(|v| sorted.binary_search(v).unwrap()).collect();
    let full_x = (1u32 << nx) - 1;
    let full_y = (1u32 << ny) - 1;
    let mut best: Option<(usize, Vec<(usize, usize)>)> = None;
    for mask in 1u32..(1 << k) {
        let members: Vec<usize> = (0..k).filter(|&c| mask >> c & 1 == 1).collect();
        let (mut cx, mut cy) = (0u32, 0u32);
        for &c in &members {
            cx |= 1 << cells[c].0;
            cy |= 1 << cells[c].1;
        }
        if cx != full_x || cy != full_y {
            continue;
        }
        let mut worst = 0;
        for (i, &p) in members.iter().enumerate() {
            for &q in &members[i + 1..] {
                worst = worst.max(rank[p * k + q]);
            }
        }
        let pairs: Vec<(usize, usize)> = members.iter().map(|&c| cells[c]).collect();
        let better = match &best {
            None => true,
            Some((w, p)) => (worst, &pairs) < (*w, p),
        };
        if better {
            best = Some((worst, pairs));
        }
    }
    let (w, pairs) = best.expect("some relation covers both sides");
    (sorted[w].clone() * ratio(1, 2), pairs)
}

/// Half the minimal distortion over relations `f ∪ g^T` with `f: X -> Y` and
/// `g` defined on the points `f` misses, cutting branches that already
/// exceed the best value seen.
pub fn gh_by_maps(x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
    fn extend(
        x: &FiniteMetricSpace,
        y: &FiniteMetricSpace,
        pairs: &mut Vec<(usize, usize)>,
        worst: Rational,
        best: &mut Option<Rational>,
    ) {
        if best.as_ref().is_some_and(|b| &worst > b) {
            return;
        }
        let next = pairs.len();
        let (a, b) = if next < x.len() {
            (Some(next), None)
        } else {
            let covered: Vec<bool> = (0..y.len()).map(|j| pairs.iter().any(|p| p.1 == j)).collect();
            match covered.iter().position(|c| !c) {
                Some(j) => (None, Some(j)),
                None => {
                    if best.as_ref().is_none_or(|b| &worst < b) {
                        *best = Some(worst);
                    }
                    return;
                }
            }
        };
        let options: Vec<(usize, usize)> = match (a, b) {
            (Some(a), _) => (0..y.len()).map(|j| (a, j)).collect(),
            (_, Some(j)) => (0..x.len()).map(|i| (i, j)).collect(),
            _ => unreachable!(),
        };
        for (i, j) in options {
            let added = pairs
                .iter()
                .map(|&(c, d)| abs_diff(x.dist(i, c), y.dist(j, d)))
                .max()
                .unwrap_or_default();
            pairs.push((i, j));
            extend(x, y, pairs, worst.clone().max(added), best);
            pairs.pop();
        }
    }
    let mut best = None;
    extend(x, y, &mut Vec::new(), Rational::default(), &mut best);
    best.expect("a correspondence exists") * ratio(1, 2)
}

/// Largest equidistant subset; ties by smaller side, then smaller index set.
pub fn brute_force_simplex(s: &FiniteMetricSpace) -> SimplexWitness {
    let n = s.len();
    let mut best: Option<SimplexWitness> = None;
    for mask in 0u32..(1 << n) {
        let points: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if points.len() < 2 {
            continue;
        }
        let side = s.dist(points[0], points[1]).clone();
        let all_equal = points
            .iter()
            .enumerate()
            .all(|(k, &a)| points[k + 1..].iter().all(|&b| s.dist(a, b) == &side));
        if !all_equal {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                (std::cmp::Reverse(points.len()), &side, &points)
                    < (std::cmp::Reverse(b.points.len()), &b.side, &b.points)
            }
        };
        if better {
            best = Some(SimplexWitness { points, side });
        }
    }
    best.expect("at least two points")
}

/// All set partitions of `0..n`, blocks in order of smallest member.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            go(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        go(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Independent loose-embedding check: injective, and equal source distances
/// exactly when equal squared image distances, over every two pairs.
pub fn is_loose_by_pairs(s: &FiniteMetricSpace, e: &Embedding) -> bool {
    let n = s.len();
    if e.coords.len() != n || e.coords.iter().any(|c| c.len() != e.dim) {
        return false;
    }
    let sq = |i: usize, j: usize| -> Rational {
        e.coords[i]
            .iter()
            .zip(&e.coords[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    };
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let images: Vec<Rational> = pairs.iter().map(|&(i, j)| sq(i, j)).collect();
    if images.iter().any(|v| v == &Rational::default()) {
        return false;
    }
    for p in 0..pairs.len() {
        for q in p + 1..pairs.len() {
            let same_source = s.dist(pairs[p].0, pairs[p].1) == s.dist(pairs[q].0, pairs[q].1);
            if same_source != (images[p] == images[q]) {
                return false;
            }
        }
    }
    true
}
