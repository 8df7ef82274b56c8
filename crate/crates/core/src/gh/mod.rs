//! Hausdorff and Gromov-Hausdorff distances, plus partition and cover
//! witnesses for the generic-space sets `M_{N,M}` and `M^N_M`.
//!
//! The Gromov-Hausdorff distance between finite spaces is computed through
//! correspondences: `d_GH(X, Y) = 1/2 min_R dis(R)`, where `R` ranges over
//! relations between `X` and `Y` that cover both sides and
//!
//! ```text
//! dis(R) = max { |d_X(x, x') - d_Y(y, y')| : (x, y), (x', y') in R }.
//! ```
//!
//! This is the standard characterization for compact spaces (Burago, Burago
//! and Ivanov, *A Course in Metric Geometry*, Thm. 7.3.25).

mod bounds;
mod exact;
mod witness;

use thiserror::Error;

use crate::rational::Rational;
use crate::space::FiniteMetricSpace;

pub use bounds::{gh_bounds, greedy_correspondence};
pub use exact::{gh_exact, DEFAULT_GH_BUDGET};
pub use witness::{
    check_dimension_witness, check_mnm, cover_order, find_mnm_partition, PartitionWitness,
    SearchSpace, WitnessKind, WitnessViolation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GhError {
    #[error("subset is empty")]
    EmptySubset,
    #[error("point {point} is out of range for a space of {len} points")]
    PointOutOfRange { point: usize, len: usize },
    #[error("not a partition: {0}")]
    NotAPartition(String),
    #[error("not a cover: point {missing} is in no member")]
    NotACover { missing: usize },
    #[error("not a correspondence: {0}")]
    NotACorrespondence(String),
}

/// `max(sup_a inf_b d(a, b), sup_b inf_a d(a, b))` for subsets of one space.
pub fn hausdorff(ambient: &FiniteMetricSpace, a: &[usize], b: &[usize]) -> Result<Rational, GhError> {
    if a.is_empty() || b.is_empty() {
        return Err(GhError::EmptySubset);
    }
    for &p in a.iter().chain(b) {
        if p >= ambient.len() {
            return Err(GhError::PointOutOfRange {
                point: p,
                len: ambient.len(),
            });
        }
    }
    let directed = |from: &[usize], to: &[usize]| {
        from.iter()
            .map(|&x| to.iter().map(|&y| ambient.dist(x, y)).min().expect("nonempty"))
            .max()
            .expect("nonempty")
            .clone()
    };
    Ok(std::cmp::max(directed(a, b), directed(b, a)))
}

/// Hausdorff distance between two finite sets of reals.
pub(crate) fn value_hausdorff(a: &[Rational], b: &[Rational]) -> Rational {
    let directed = |from: &[Rational], to: &[Rational]| {
        from.iter()
            .map(|x| to.iter().map(|y| crate::rational::abs_diff(x, y)).min().unwrap_or_default())
            .max()
            .unwrap_or_default()
    };
    std::cmp::max(directed(a, b), directed(b, a))
}

/// A relation between the points of `X` and `Y` covering both sides.
///
/// Pairs are kept sorted and without repeats.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Correspondence {
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(mut pairs: Vec<(usize, usize)>, x_len: usize, y_len: usize) -> Result<Self, GhError> {
        pairs.sort_unstable();
        pairs.dedup();
        let mut seen_x = vec![false; x_len];
        let mut seen_y = vec![false; y_len];
        for &(x, y) in &pairs {
            if x >= x_len || y >= y_len {
                return Err(GhError::NotACorrespondence(format!(
                    "pair ({x}, {y}) is out of range"
                )));
            }
            seen_x[x] = true;
            seen_y[y] = true;
        }
        if let Some(x) = seen_x.iter().position(|s| !s) {
            return Err(GhError::NotACorrespondence(format!("x point {x} is uncovered")));
        }
        if let Some(y) = seen_y.iter().position(|s| !s) {
            return Err(GhError::NotACorrespondence(format!("y point {y} is uncovered")));
        }
        Ok(Correspondence { pairs })
    }

    pub(crate) fn from_sorted(pairs: Vec<(usize, usize)>) -> Self {
        debug_assert!(pairs.windows(2).all(|w| w[0] < w[1]));
        Correspondence { pairs }
    }

    pub fn identity(n: usize) -> Self {
        Correspondence {
            pairs: (0..n).map(|i| (i, i)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        Correspondence { pairs }
    }

    pub fn distortion(&self, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Rational {
        let mut worst = Rational::default();
        for (k, &(a, b)) in self.pairs.iter().enumerate() {
            for &(c, d) in &self.pairs[k + 1..] {
                let gap = crate::rational::abs_diff(x.dist(a, c), y.dist(b, d));
                if gap > worst {
                    worst = gap;
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Proof {
    Exact,
    /// The search budget ran out; the true distance lies in `[lower, upper]`.
    Bounds { lower: Rational, upper: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhResult {
    /// Half the distortion of `correspondence`.
    pub value: Rational,
    pub correspondence: Correspondence,
    pub proof: Proof,
}

impl GhResult {
    pub fn is_exact(&self) -> bool {
        self.proof == Proof::Exact
    }

    /// The interval known to contain the distance.
    pub fn interval(&self) -> (Rational, Rational) {
        match &self.proof {
            Proof::Exact => (self.value.clone(), self.value.clone()),
            Proof::Bounds { lower, upper } => (lower.clone(), upper.clone()),
        }
    }
}
