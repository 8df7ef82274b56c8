//! Separated-point sets and the isolated-point filtration.
//!
//! `points_ge_r` returns the points with no neighbour closer than `r`.
//! Stripping repeatedly removes those points for a decreasing list of radii;
//! each layer depends only on the metric, so it is preserved by every
//! isometry of the space.

use num_traits::Signed;
use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteMetricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StripError {
    #[error("no thresholds given")]
    EmptyThresholds,
    #[error("threshold {0} is not positive")]
    NonPositiveThreshold(usize),
    #[error("thresholds are not strictly decreasing at position {0}")]
    NotDecreasing(usize),
}

/// Layers removed by successive stripping rounds, and what is left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StripFiltration {
    pub thresholds: Vec<Rational>,
    /// `layers[t]` holds the points removed with radius `thresholds[t]`.
    pub layers: Vec<Vec<usize>>,
    pub residue: Vec<usize>,
}

impl StripFiltration {
    /// Index of the layer containing `point`, or `None` for the residue.
    pub fn layer_of(&self, point: usize) -> Option<usize> {
        self.layers.iter().position(|layer| layer.contains(&point))
    }
}

/// `{ x : d(x, y) >= r for every y != x }`, in increasing index order.
pub fn points_ge_r(space: &FiniteMetricSpace, r: &Rational) -> Vec<usize> {
    let all: Vec<usize> = (0..space.len()).collect();
    separated_within(space, &all, r)
}

/// Like [`points_ge_r`], with neighbours restricted to `alive`.
fn separated_within(space: &FiniteMetricSpace, alive: &[usize], r: &Rational) -> Vec<usize> {
    alive
        .iter()
        .copied()
        .filter(|&x| alive.iter().all(|&y| y == x || space.dist(x, y) >= r))
        .collect()
}

pub fn isolation_strip(
    space: &FiniteMetricSpace,
    thresholds: &[Rational],
) -> Result<StripFiltration, StripError> {
    if thresholds.is_empty() {
        return Err(StripError::EmptyThresholds);
    }
    if let Some(t) = thresholds.iter().position(|r| !r.is_positive()) {
        return Err(StripError::NonPositiveThreshold(t));
    }
    if let Some(t) = thresholds.windows(2).position(|w| w[1] >= w[0]) {
        return Err(StripError::NotDecreasing(t + 1));
    }
    let mut alive: Vec<usize> = (0..space.len()).collect();
    let mut layers = Vec::with_capacity(thresholds.len());
    for r in thresholds {
        let layer = separated_within(space, &alive, r);
        alive.retain(|x| !layer.contains(x));
        layers.push(layer);
    }
    Ok(StripFiltration {
        thresholds: thresholds.to_vec(),
        layers,
        residue: alive,
    })
}
