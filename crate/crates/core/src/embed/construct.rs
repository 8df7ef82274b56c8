//! An exact loose embedding of any finite space, in high dimension.
//!
//! Every unordered pair `{i, j}` gets its own axis, on which `i` sits at
//! `+g` and `j` at `-g`, where `g = 1 + rank` of `d(i, j)` among the distinct
//! distance values. Writing `R_i` for the sum of `g^2` over the pairs at `i`,
//! the squared image distance is `R_i + R_j + 2 g_ij^2`. Each point also gets
//! a few private axes carrying integers whose squares add up to
//! `max R - R_i`, so `R_i` is topped up to the common value `max R` and the
//! squared distance becomes `2 max R + 2 g_ij^2`, a strictly increasing
//! function of the distance rank. The top-up always fits in four axes
//! (Lagrange's four-square theorem). All coordinates are integers.

use super::{Embedding, EmbedError};
use crate::pattern::distance_pattern;
use crate::rational::int;
use crate::space::FiniteMetricSpace;

struct Layout {
    pair_values: Vec<(usize, usize, i64)>,
    top_ups: Vec<Vec<i64>>,
}

fn layout(space: &FiniteMetricSpace) -> Layout {
    let n = space.len();
    let pattern = distance_pattern(space);
    let mut row_sums = vec![0i64; n];
    let mut pair_values = Vec::with_capacity(space.pair_count());
    for (i, j) in space.pairs() {
        let g = pattern.block_of(i, j) as i64 + 1;
        row_sums[i] += g * g;
        row_sums[j] += g * g;
        pair_values.push((i, j, g));
    }
    let top = row_sums.iter().copied().max().unwrap_or(0);
    let top_ups = row_sums.iter().map(|&r| sum_of_squares(top - r)).collect();
    Layout {
        pair_values,
        top_ups,
    }
}

/// Dimension used by [`pair_axis_embedding`] for this space.
pub fn constructive_dimension(space: &FiniteMetricSpace) -> usize {
    if space.len() < 2 {
        return 0;
    }
    let l = layout(space);
    l.pair_values.len() + l.top_ups.iter().map(Vec::len).sum::<usize>()
}

pub fn pair_axis_embedding(space: &FiniteMetricSpace) -> Result<Embedding, EmbedError> {
    let n = space.len();
    let dim = constructive_dimension(space);
    let mut coords = vec![vec![int(0); dim]; n];
    if n >= 2 {
        let l = layout(space);
        for (axis, &(i, j, g)) in l.pair_values.iter().enumerate() {
            coords[i][axis] = int(g);
            coords[j][axis] = int(-g);
        }
        let mut axis = l.pair_values.len();
        for (i, parts) in l.top_ups.iter().enumerate() {
            for &p in parts {
                coords[i][axis] = int(p);
                axis += 1;
            }
        }
    }
    let emb = super::verify_loose(space, &Embedding::new(dim, coords))?;
    match emb.verified {
        super::Verification::Violated(v) => Err(EmbedError::VerificationFailed(v)),
        _ => Ok(emb),
    }
}

/// Fewest positive integers whose squares sum to `m` (at most four).
fn sum_of_squares(m: i64) -> Vec<i64> {
    if m == 0 {
        return Vec::new();
    }
    for parts in 1..=4 {
        if let Some(found) = squares_exactly(m, parts, isqrt(m)) {
            return found;
        }
    }
    unreachable!("every non-negative integer is a sum of four squares")
}

/// `parts` positive squares, non-increasing, each at most `cap^2`, summing to `m`.
fn squares_exactly(m: i64, parts: usize, cap: i64) -> Option<Vec<i64>> {
    if parts == 0 {
        return (m == 0).then(Vec::new);
    }
    if m <= 0 {
        return None;
    }
    if parts == 1 {
        let r = isqrt(m);
        return (r * r == m && r <= cap).then(|| vec![r]);
    }
    let mut a = isqrt(m).min(cap);
    while a >= 1 && a * a * parts as i64 >= m {
        if let Some(mut rest) = squares_exactly(m - a * a, parts - 1, a) {
            rest.insert(0, a);
            return Some(rest);
        }
        a -= 1;
    }
    None
}

fn isqrt(m: i64) -> i64 {
    let mut r = (m as f64).sqrt() as i64;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    r
}
