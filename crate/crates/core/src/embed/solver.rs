//! Loose embeddings into a requested dimension.
//!
//! The search runs through exact routes first and falls back to numerics:
//!
//! 1. spaces with at most one point embed trivially;
//! 2. an equidistant set larger than `dim + 1` proves infeasibility;
//! 3. injective spaces go through [`embed_line_branching`] and are padded;
//! 4. if `dim` is at least [`constructive_dimension`], the pair-axis
//!    construction is returned;
//! 5. otherwise a multi-start descent minimizes [`Penalty`] and each
//!    converged configuration is snapped to rational coordinates.
//!
//! Only embeddings that pass [`verify_loose`] are ever returned.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{
    constructive_dimension, embed_line_branching, pair_axis_embedding, verify_loose, Embedding,
};
use crate::obstruction::{max_regular_simplex, SimplexWitness};
use crate::pattern::distance_pattern;
use crate::rational::{int, round_to_grid, to_f64, Rational};
use crate::space::{FiniteMetricSpace, Pair};

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Class separation on squared image lengths; [`default_margin`] when `None`.
    pub margin: Option<f64>,
    pub max_iters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Run restarts on the rayon pool. Results do not depend on this flag.
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            margin: None,
            max_iters: 3000,
            restarts: 8,
            seed: 0,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InfeasibleReason {
    /// An equidistant set has more than `dim + 1` points.
    SimplexObstruction,
    /// No restart produced an exactly verified embedding.
    SearchExhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfeasibleReport {
    pub dim: usize,
    pub reason: InfeasibleReason,
    /// Smallest penalty reached over all restarts, when the descent ran.
    pub best_residual: Option<f64>,
    /// Present whenever the simplex bound exceeds `dim`.
    pub certificate: Option<SimplexWitness>,
    pub restarts: usize,
}

pub fn solve_loose_embedding(
    space: &FiniteMetricSpace,
    dim: usize,
    opts: &SolverOptions,
) -> Result<Embedding, InfeasibleReport> {
    let n = space.len();
    if n <= 1 {
        let emb = Embedding::new(dim, vec![vec![int(0); dim]; n]);
        return Ok(verify_loose(space, &emb).expect("shapes match"));
    }
    let simplex = max_regular_simplex(space).expect("at least two points");
    if simplex.dimension() > dim {
        return Err(InfeasibleReport {
            dim,
            reason: InfeasibleReason::SimplexObstruction,
            best_residual: None,
            certificate: Some(simplex),
            restarts: 0,
        });
    }
    let pattern = distance_pattern(space);
    if pattern.is_injective() {
        if let Ok(e) = embed_line_branching(space, opts.seed) {
            return Ok(e.padded(dim));
        }
    }
    if dim >= constructive_dimension(space) {
        if let Ok(e) = pair_axis_embedding(space) {
            return Ok(e.padded(dim));
        }
    }

    let margin = opts.margin.unwrap_or_else(|| default_margin(space));
    let penalty = Penalty::new(space, dim, margin);
    let attempt = |r: usize| penalty.attempt(space, restart_seed(opts.seed, r), opts.max_iters);
    let outcomes: Vec<Result<Embedding, f64>> = if opts.parallel {
        (0..opts.restarts).into_par_iter().map(attempt).collect()
    } else {
        (0..opts.restarts).map(attempt).collect()
    };
    let mut best_residual: Option<f64> = None;
    for outcome in outcomes {
        match outcome {
            Ok(e) => return Ok(e),
            Err(res) => {
                best_residual = Some(best_residual.map_or(res, |b| b.min(res)));
            }
        }
    }
    Err(InfeasibleReport {
        dim,
        reason: InfeasibleReason::SearchExhausted,
        best_residual,
        certificate: None,
        restarts: opts.restarts,
    })
}

/// Tries each dimension in turn and returns the first success, or the report
/// for the last dimension tried. Dimensions below the simplex bound are skipped.
pub fn solve_escalating(
    space: &FiniteMetricSpace,
    dims: impl IntoIterator<Item = usize>,
    opts: &SolverOptions,
) -> Result<Embedding, InfeasibleReport> {
    let floor = crate::obstruction::dim_lower_bound(space);
    let mut last = None;
    for dim in dims {
        if dim < floor && last.is_some() {
            continue;
        }
        match solve_loose_embedding(space, dim, opts) {
            Ok(e) => return Ok(e),
            Err(report) => last = Some(report),
        }
    }
    Err(last.expect("at least one dimension to try"))
}

fn restart_seed(seed: u64, restart: usize) -> u64 {
    seed ^ (restart as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// A tenth of the smallest gap between consecutive distance values, with
/// distances scaled to unit diameter, and never below `1e-3`.
pub fn default_margin(space: &FiniteMetricSpace) -> f64 {
    let diam = to_f64(&space.diameter());
    let pattern = distance_pattern(space);
    let gap = pattern
        .blocks()
        .windows(2)
        .map(|w| to_f64(&(&w[1].value - &w[0].value)) / diam)
        .fold(f64::INFINITY, f64::min);
    if gap.is_finite() {
        (0.1 * gap).max(1e-3)
    } else {
        1e-3
    }
}

/// Penalty over point coordinates and one target squared length per class.
///
/// With `q_ij = |x_i - x_j|^2` and targets `s_b`, the value is
///
/// ```text
///   sum_b sum_{ij in b} (q_ij - s_b)^2                 coincidence stress
/// + sum_{b < c} max(0, m^2 - (s_b - s_c)^2)^2          class separation
/// + sum_b max(0, m - s_b)^2                            no collapse
/// ```
///
/// It vanishes exactly when every class is realized at one squared length,
/// distinct classes sit at least `m` apart and no length falls below `m`.
/// Variables are laid out as `n * dim` coordinates followed by the targets.
#[derive(Debug, Clone)]
pub struct Penalty {
    points: usize,
    dim: usize,
    classes: Vec<Vec<Pair>>,
    margin: f64,
}

impl Penalty {
    pub fn new(space: &FiniteMetricSpace, dim: usize, margin: f64) -> Self {
        let classes = distance_pattern(space)
            .blocks()
            .iter()
            .map(|b| b.pairs.clone())
            .collect();
        Penalty {
            points: space.len(),
            dim,
            classes,
            margin,
        }
    }

    pub fn variables(&self) -> usize {
        self.points * self.dim + self.classes.len()
    }

    fn squared(&self, z: &[f64], i: usize, j: usize) -> f64 {
        let (a, b) = (&z[i * self.dim..(i + 1) * self.dim], &z[j * self.dim..(j + 1) * self.dim]);
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        let targets = &z[self.points * self.dim..];
        let m = self.margin;
        let mut total = 0.0;
        for (b, class) in self.classes.iter().enumerate() {
            for &(i, j) in class {
                let r = self.squared(z, i, j) - targets[b];
                total += r * r;
            }
            let low = (m - targets[b]).max(0.0);
            total += low * low;
            for c in b + 1..self.classes.len() {
                let delta = targets[b] - targets[c];
                let h = (m * m - delta * delta).max(0.0);
                total += h * h;
            }
        }
        total
    }

    /// Writes the gradient into `grad` and returns the value.
    pub fn value_and_gradient(&self, z: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let offset = self.points * self.dim;
        let targets = &z[offset..];
        let m = self.margin;
        let mut total = 0.0;
        for (b, class) in self.classes.iter().enumerate() {
            for &(i, j) in class {
                let r = self.squared(z, i, j) - targets[b];
                total += r * r;
                // d(r^2)/dx_i = 2r * 2(x_i - x_j)
                for k in 0..self.dim {
                    let diff = z[i * self.dim + k] - z[j * self.dim + k];
                    grad[i * self.dim + k] += 4.0 * r * diff;
                    grad[j * self.dim + k] -= 4.0 * r * diff;
                }
                grad[offset + b] -= 2.0 * r;
            }
            let low = (m - targets[b]).max(0.0);
            total += low * low;
            grad[offset + b] -= 2.0 * low;
            for c in b + 1..self.classes.len() {
                let delta = targets[b] - targets[c];
                let h = (m * m - delta * delta).max(0.0);
                total += h * h;
                // d(h^2)/d(delta) = 2h * (-2 delta)
                let d = -4.0 * h * delta;
                grad[offset + b] += d;
                grad[offset + c] -= d;
            }
        }
        total
    }

    /// Random start in `[-1, 1]^(n dim)` with targets set to class means.
    pub fn random_start(&self, rng: &mut impl Rng) -> Vec<f64> {
        let mut z: Vec<f64> = (0..self.points * self.dim)
            .map(|_| rng.random_range(-1.0..=1.0))
            .collect();
        for class in &self.classes {
            let mean = class.iter().map(|&(i, j)| self.squared(&z, i, j)).sum::<f64>()
                / class.len() as f64;
            z.push(mean);
        }
        z
    }

    /// Gradient descent with Armijo backtracking; returns the final value.
    ///
    /// Stops early once the value is negligible, or when a window of
    /// iterations improves it by less than one percent.
    pub fn descend(&self, z: &mut [f64], max_iters: usize) -> f64 {
        const WINDOW: usize = 200;
        let mut grad = vec![0.0; z.len()];
        let mut trial = vec![0.0; z.len()];
        let mut value = self.value_and_gradient(z, &mut grad);
        let mut step = 0.1;
        let mut checkpoint = value;
        for iter in 1..=max_iters {
            let norm2: f64 = grad.iter().map(|g| g * g).sum();
            if value < CONVERGED || norm2 < 1e-36 {
                break;
            }
            loop {
                for ((t, x), g) in trial.iter_mut().zip(z.iter()).zip(&grad) {
                    *t = x - step * g;
                }
                let next = self.value(&trial);
                if next <= value - 1e-4 * step * norm2 {
                    z.copy_from_slice(&trial);
                    step = (step * 2.0).min(1e3);
                    break;
                }
                step *= 0.5;
                if step < 1e-24 {
                    return value;
                }
            }
            value = self.value_and_gradient(z, &mut grad);
            if iter % WINDOW == 0 {
                if value > SNAP_THRESHOLD && value > 0.99 * checkpoint {
                    break;
                }
                checkpoint = value;
            }
        }
        value
    }

    fn attempt(&self, space: &FiniteMetricSpace, seed: u64, max_iters: usize) -> Result<Embedding, f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut z = self.random_start(&mut rng);
        let residual = self.descend(&mut z, max_iters);
        if residual > SNAP_THRESHOLD {
            return Err(residual);
        }
        let coords: Vec<Vec<f64>> = (0..self.points)
            .map(|i| z[i * self.dim..(i + 1) * self.dim].to_vec())
            .collect();
        snap(space, &coords, self.dim).ok_or(residual)
    }
}

/// Penalty below which descent stops.
const CONVERGED: f64 = 1e-24;

/// Penalty below which a configuration is worth snapping.
const SNAP_THRESHOLD: f64 = 1e-10;

/// Grid denominators tried when snapping, coarsest first.
const SNAP_DENOMINATORS: &[u64] = &[
    1, 2, 3, 4, 5, 6, 8, 10, 12, 16, 24, 32, 64, 128, 256, 1024, 4096, 1 << 16, 1 << 20,
];

/// Rationalizes a numerical solution.
///
/// The configuration is expressed in orthonormal frames adapted to a few
/// starting points (first point at the origin, first edge along an axis, unit
/// first edge) and rounded to successively finer grids. Lattice-like
/// configurations become exact after rounding; anything that does not verify
/// is rejected.
fn snap(space: &FiniteMetricSpace, coords: &[Vec<f64>], dim: usize) -> Option<Embedding> {
    let n = coords.len();
    for start in 0..n.min(4) {
        let mut order = vec![start];
        order.extend((0..n).filter(|&i| i != start));
        let Some(framed) = canonical_frame(coords, &order, dim) else {
            continue;
        };
        for &den in SNAP_DENOMINATORS {
            let rounded: Option<Vec<Vec<Rational>>> = framed
                .iter()
                .map(|p| p.iter().map(|&x| round_to_grid(x, den)).collect())
                .collect();
            let emb = Embedding::new(dim, rounded?);
            let checked = verify_loose(space, &emb).ok()?;
            if checked.is_loose() {
                return Some(checked);
            }
        }
    }
    None
}

/// Coordinates in the Gram-Schmidt frame of `order`, scaled to a unit first edge.
fn canonical_frame(coords: &[Vec<f64>], order: &[usize], dim: usize) -> Option<Vec<Vec<f64>>> {
    let origin = &coords[order[0]];
    let rel = |p: &[f64]| -> Vec<f64> { p.iter().zip(origin).map(|(a, b)| a - b).collect() };
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    let candidates = order[1..]
        .iter()
        .map(|&i| rel(&coords[i]))
        .chain((0..dim).map(|k| {
            let mut e = vec![0.0; dim];
            e[k] = 1.0;
            e
        }));
    for mut v in candidates {
        if basis.len() == dim {
            break;
        }
        for b in &basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-7 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    let scale = rel(&coords[*order.get(1)?])
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    if scale < 1e-12 {
        return None;
    }
    Some(
        coords
            .iter()
            .map(|p| {
                let r = rel(p);
                basis
                    .iter()
                    .map(|b| r.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / scale)
                    .collect()
            })
            .collect(),
    )
}
