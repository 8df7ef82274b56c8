//! Small fixtures and brute-force oracles shared by unit tests.

use rand::Rng;

use crate::obstruction::SimplexWitness;
use crate::rational::{int, Rational};
use crate::space::FiniteMetricSpace;

pub fn matrix(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
    rows.iter()
        .map(|row| row.iter().map(|&v| int(v)).collect())
        .collect()
}

pub fn space(rows: &[&[i64]]) -> FiniteMetricSpace {
    FiniteMetricSpace::from_matrix(matrix(rows)).expect("fixture is a metric")
}

/// Symmetric, zero diagonal, off-diagonal integers in `1..=max`; not
/// necessarily metric.
pub fn random_matrix<R: Rng>(rng: &mut R, n: usize, max: i64) -> Vec<Vec<Rational>> {
    let mut m = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = int(rng.random_range(1..=max));
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    m
}

/// Enumerates every subset of at least two points.
pub fn brute_force_simplex(space: &FiniteMetricSpace) -> Option<SimplexWitness> {
    let n = space.len();
    let mut best: Option<SimplexWitness> = None;
    for mask in 0u32..(1 << n) {
        let points: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if points.len() < 2 {
            continue;
        }
        let side = space.dist(points[0], points[1]).clone();
        let candidate = SimplexWitness { points, side };
        if !candidate.holds_in(space) {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => (
                std::cmp::Reverse(candidate.points.len()),
                &candidate.side,
                &candidate.points,
            ) < (std::cmp::Reverse(b.points.len()), &b.side, &b.points),
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}
