//! The finite metric space model and its validator.

use std::collections::HashMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

/// Why a labelled matrix is not a finite metric space.
///
/// Witness indices are positions in the label list. Violations are reported
/// for the first failing axiom in the order: shape, labels, sign, diagonal,
/// symmetry, positivity, triangle inequality.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("{labels} labels for a matrix with {rows} rows")]
    LabelCount { labels: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("label {label:?} used for points {first} and {second}")]
    DuplicateLabel {
        label: String,
        first: usize,
        second: usize,
    },
    #[error("negative entry at ({0}, {1})")]
    NegativeEntry(usize, usize),
    #[error("nonzero diagonal entry at {0}")]
    NonzeroDiagonal(usize),
    #[error("d({0},{1}) != d({1},{0})")]
    Asymmetric(usize, usize),
    #[error("distinct points {0} and {1} at distance zero")]
    ZeroOffDiagonal(usize, usize),
    /// `d(i,j) > d(i,k) + d(k,j)`.
    #[error("triangle inequality fails: d({0},{1}) > d({0},{2}) + d({2},{1})")]
    TriangleViolation(usize, usize, usize),
}

impl MetricError {
    pub fn kind(&self) -> &'static str {
        match self {
            MetricError::LabelCount { .. } => "LabelCount",
            MetricError::NotSquare { .. } => "NotSquare",
            MetricError::DuplicateLabel { .. } => "DuplicateLabel",
            MetricError::NegativeEntry(..) => "NegativeEntry",
            MetricError::NonzeroDiagonal(..) => "NonzeroDiagonal",
            MetricError::Asymmetric(..) => "Asymmetric",
            MetricError::ZeroOffDiagonal(..) => "ZeroOffDiagonal",
            MetricError::TriangleViolation(..) => "TriangleViolation",
        }
    }
}

/// A labelled point set with an exact symmetric distance matrix.
///
/// Instances only exist in validated form: the matrix is symmetric with a
/// zero diagonal, positive off the diagonal, and satisfies the triangle
/// inequality. Labels are distinct and index-aligned with the matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Rational>,
}

/// An unordered pair of point indices, smaller index first.
pub type Pair = (usize, usize);

pub fn validate_metric(
    labels: Vec<String>,
    matrix: Vec<Vec<Rational>>,
) -> Result<FiniteMetricSpace, MetricError> {
    let n = matrix.len();
    if labels.len() != n {
        return Err(MetricError::LabelCount {
            labels: labels.len(),
            rows: n,
        });
    }
    for (row, entries) in matrix.iter().enumerate() {
        if entries.len() != n {
            return Err(MetricError::NotSquare {
                row,
                len: entries.len(),
                expected: n,
            });
        }
    }
    let mut seen: HashMap<&str, usize> = HashMap::with_capacity(n);
    for (i, label) in labels.iter().enumerate() {
        if let Some(&first) = seen.get(label.as_str()) {
            return Err(MetricError::DuplicateLabel {
                label: label.clone(),
                first,
                second: i,
            });
        }
        seen.insert(label, i);
    }
    for (i, row) in matrix.iter().enumerate() {
        for (j, value) in row.iter().enumerate() {
            if value.is_negative() {
                return Err(MetricError::NegativeEntry(i, j));
            }
        }
    }
    for (i, row) in matrix.iter().enumerate() {
        if !row[i].is_zero() {
            return Err(MetricError::NonzeroDiagonal(i));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(MetricError::Asymmetric(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if matrix[i][j].is_zero() {
                return Err(MetricError::ZeroOffDiagonal(i, j));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if matrix[i][j] > &matrix[i][k] + &matrix[k][j] {
                    return Err(MetricError::TriangleViolation(i, j, k));
                }
            }
        }
    }
    let dist = matrix.into_iter().flatten().collect();
    Ok(FiniteMetricSpace { labels, dist })
}

impl FiniteMetricSpace {
    /// Validates a matrix, labelling the points `p0, p1, ...`.
    pub fn from_matrix(matrix: Vec<Vec<Rational>>) -> Result<Self, MetricError> {
        let labels = (0..matrix.len()).map(|i| format!("p{i}")).collect();
        validate_metric(labels, matrix)
    }

    /// Builds a space from a distance function on indices and validates it.
    pub fn from_fn(
        labels: Vec<String>,
        mut dist: impl FnMut(usize, usize) -> Rational,
    ) -> Result<Self, MetricError> {
        let n = labels.len();
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::zero() } else { dist(i, j) }).collect())
            .collect();
        validate_metric(labels, matrix)
    }

    pub fn empty() -> Self {
        FiniteMetricSpace {
            labels: Vec::new(),
            dist: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    pub fn to_matrix(&self) -> Vec<Vec<Rational>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// All unordered pairs `(i, j)`, `i < j`, in lexicographic order.
    pub fn pairs(&self) -> impl Iterator<Item = Pair> + '_ {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    pub fn pair_count(&self) -> usize {
        let n = self.len();
        n * n.saturating_sub(1) / 2
    }

    /// Largest distance; zero for spaces with fewer than two points.
    pub fn diameter(&self) -> Rational {
        self.dist.iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// Diameter of a subset of the points.
    pub fn subset_diameter(&self, points: &[usize]) -> Rational {
        let mut best = Rational::zero();
        for (a, &i) in points.iter().enumerate() {
            for &j in &points[a + 1..] {
                if self.dist(i, j) > &best {
                    best = self.dist(i, j).clone();
                }
            }
        }
        best
    }

    /// Smallest positive distance, if there are at least two points.
    pub fn min_distance(&self) -> Option<Rational> {
        self.pairs().map(|(i, j)| self.dist(i, j)).min().cloned()
    }

    /// Largest distance from `i` to any other point.
    pub fn eccentricity(&self, i: usize) -> Rational {
        self.row(i).iter().max().cloned().unwrap_or_else(Rational::zero)
    }

    /// The subspace on `points`, in the given order.
    pub fn restrict(&self, points: &[usize]) -> FiniteMetricSpace {
        let labels = points.iter().map(|&i| self.labels[i].clone()).collect();
        let dist = points
            .iter()
            .flat_map(|&i| points.iter().map(move |&j| self.dist(i, j).clone()))
            .collect();
        FiniteMetricSpace { labels, dist }
    }

    /// The isometric copy whose point `k` is this space's point `order[k]`.
    ///
    /// `order` must be a permutation of `0..len()`.
    pub fn permute(&self, order: &[usize]) -> FiniteMetricSpace {
        assert_eq!(order.len(), self.len(), "permutation length mismatch");
        self.restrict(order)
    }

    /// All distances multiplied by a positive factor.
    pub fn scaled(&self, factor: &Rational) -> FiniteMetricSpace {
        assert!(factor.is_positive(), "scale factor must be positive");
        FiniteMetricSpace {
            labels: self.labels.clone(),
            dist: self.dist.iter().map(|d| d * factor).collect(),
        }
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<FiniteMetricSpace, MetricError> {
        validate_metric(labels, self.to_matrix())
    }
}

impl fmt::Debug for FiniteMetricSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = (0..self.len())
            .map(|i| self.row(i).iter().map(|d| d.to_string()).collect())
            .collect();
        f.debug_struct("FiniteMetricSpace")
            .field("labels", &self.labels)
            .field("dist", &rows)
            .finish()
    }
}
