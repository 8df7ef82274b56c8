//! Seeded generators of finite metric spaces.
//!
//! All generators produce valid spaces by construction, so callers never
//! need to filter samples through the validator.

use rand::Rng;

use crate::rational::{int, ratio, round_to_grid, Rational};
use crate::space::FiniteMetricSpace;

/// Grid used to rationalize Euclidean distances.
pub const DEFAULT_GRID: u64 = 1 << 40;

fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// Rationalizes Euclidean distances between float points.
///
/// Each distance is rounded to the nearest multiple of `1/grid` and then
/// lifted by `2/grid`. The rounding error is at most `1/(2 grid)` per entry,
/// and the uniform lift absorbs three such errors, so the triangle
/// inequality survives and coincident points stay apart.
pub fn rationalized_euclidean(points: &[Vec<f64>], grid: u64) -> FiniteMetricSpace {
    let lift = ratio(2, 1) / int(grid as i64);
    let n = points.len();
    FiniteMetricSpace::from_fn(default_labels(n), |i, j| {
        let d = points[i]
            .iter()
            .zip(&points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        round_to_grid(d, grid).expect("finite distance") + &lift
    })
    .expect("lifted rationalization is always metric")
}

/// Uniform points in the unit hypercube `[0,1]^dim`, Euclidean distances rationalized.
pub fn hypercube_space<R: Rng + ?Sized>(rng: &mut R, n: usize, dim: usize) -> FiniteMetricSpace {
    let points: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect();
    rationalized_euclidean(&points, DEFAULT_GRID)
}

/// Integer distances drawn uniformly from `lo..=2*lo`.
///
/// Any symmetric matrix with off-diagonal entries in `[lo, 2 lo]` is a metric,
/// and the small value range produces many repeated distances.
pub fn banded_integer_space<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: u32) -> FiniteMetricSpace {
    assert!(lo >= 1);
    let mut m = vec![vec![int(0); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = int(rng.random_range(lo..=2 * lo) as i64);
            m[i][j] = v.clone();
            m[j][i] = v;
        }
    }
    FiniteMetricSpace::from_fn(default_labels(n), |i, j| m[i][j].clone())
        .expect("banded matrices are metric")
}

/// Points on the real line at the given rational positions.
pub fn line_space(positions: &[Rational]) -> Result<FiniteMetricSpace, crate::MetricError> {
    FiniteMetricSpace::from_fn(default_labels(positions.len()), |i, j| {
        crate::rational::abs_diff(&positions[i], &positions[j])
    })
}

/// Tight clusters around random centres in the unit square.
///
/// `spread` is the side of the box each cluster is sampled from.
pub fn clustered_space<R: Rng + ?Sized>(
    rng: &mut R,
    clusters: usize,
    per_cluster: usize,
    spread: f64,
) -> FiniteMetricSpace {
    let mut points = Vec::with_capacity(clusters * per_cluster);
    for _ in 0..clusters {
        let cx: f64 = rng.random();
        let cy: f64 = rng.random();
        for _ in 0..per_cluster {
            points.push(vec![
                cx + spread * rng.random::<f64>(),
                cy + spread * rng.random::<f64>(),
            ]);
        }
    }
    rationalized_euclidean(&points, DEFAULT_GRID)
}

/// `k` pairwise equidistant points at distance `side`.
pub fn regular_simplex(k: usize, side: Rational) -> FiniteMetricSpace {
    FiniteMetricSpace::from_fn(default_labels(k), |_, _| side.clone())
        .expect("positive side gives a metric")
}

/// A uniformly random permutation of `0..n`.
pub fn random_permutation<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}
