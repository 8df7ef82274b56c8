//! Loose embeddings into Euclidean space.
//!
//! A loose embedding `f` is injective and satisfies
//! `|fx - fx'| = |fz - fz'|  <=>  d(x, x') = d(z, z')` for all points.
//! Distances are non-negative, so equality of distances is equality of
//! squared distances; [`verify_loose`] compares exact rational squared
//! distances and never takes a square root. For finite spaces the continuity
//! requirement on `f` is vacuous.
//!
//! Construction routes:
//! * [`embed_line_branching`]: spaces with injective distances go to the real
//!   line through nested, generically placed intervals along a dendrogram;
//! * [`solve_loose_embedding`]: arbitrary spaces in a requested dimension;
//! * [`perturb_to_injective`]: nearby spaces with injective distances.

mod branching;
mod construct;
mod dendrogram;
mod perturb;
mod solver;

use std::collections::HashMap;

use thiserror::Error;

use crate::pattern::{distance_pattern, Collision};
use crate::rational::Rational;
use crate::space::{FiniteMetricSpace, Pair};

pub use branching::{embed_line_branching, embed_line_branching_with, DEFAULT_RETRY_BUDGET};
pub use construct::{constructive_dimension, pair_axis_embedding};
pub use dendrogram::{build_dendrogram, single_linkage_levels, ClusterNode, ClusterTree};
pub use perturb::{identity_deviation, perturb_to_injective, perturb_to_injective_with};
pub use solver::{
    default_margin, solve_escalating, solve_loose_embedding, InfeasibleReason, InfeasibleReport,
    Penalty, SolverOptions,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("embedding has {found} points, space has {expected}")]
    PointCountMismatch { expected: usize, found: usize },
    #[error("coordinate vector of point {point} has length {found}, expected {expected}")]
    DimMismatch {
        point: usize,
        expected: usize,
        found: usize,
    },
    #[error("distances are not injective: pairs {:?} and {:?} collide", .0.first, .0.second)]
    NotInjective(Collision),
    #[error("no generic interval placement found for dendrogram node {node}")]
    GenericityExhausted { node: usize },
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("eps {eps} is not below a quarter of the smallest distance ({limit})")]
    EpsTooLarge { eps: Rational, limit: Rational },
    #[error("no valid injective perturbation within {attempts} draws")]
    PerturbationExhausted { attempts: usize },
    #[error("constructed embedding failed verification: {0:?}")]
    VerificationFailed(Violation),
}

/// Two pairs on which an embedding breaks the equality pattern, or two
/// points sent to the same image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// Distinct points with identical images.
    Coincident { first: usize, second: usize },
    /// Equal source distances, different image distances.
    SplitClass { first: Pair, second: Pair },
    /// Different source distances, equal image distances.
    MergedClass { first: Pair, second: Pair },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Verification {
    #[default]
    Unverified,
    Loose,
    Violated(Violation),
}

/// Rational coordinates in `R^dim` for every point of a space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub dim: usize,
    pub coords: Vec<Vec<Rational>>,
    pub verified: Verification,
}

impl Embedding {
    pub fn new(dim: usize, coords: Vec<Vec<Rational>>) -> Self {
        Embedding {
            dim,
            coords,
            verified: Verification::Unverified,
        }
    }

    pub fn is_loose(&self) -> bool {
        self.verified == Verification::Loose
    }

    pub fn squared_distance(&self, i: usize, j: usize) -> Rational {
        squared_distance(&self.coords[i], &self.coords[j])
    }

    /// Appends zero coordinates up to `dim`; image distances are unchanged.
    pub fn padded(mut self, dim: usize) -> Self {
        assert!(dim >= self.dim, "cannot pad {} down to {dim}", self.dim);
        for c in &mut self.coords {
            c.resize(dim, Rational::default());
        }
        self.dim = dim;
        self
    }
}

pub(crate) fn squared_distance(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            &d * &d
        })
        .sum()
}

/// Checks both directions of the pattern condition and injectivity, exactly.
///
/// Pairs are scanned in lexicographic order; the reported violation is the
/// first pair that disagrees with an earlier pair.
pub fn verify_loose(source: &FiniteMetricSpace, emb: &Embedding) -> Result<Embedding, EmbedError> {
    let n = source.len();
    if emb.coords.len() != n {
        return Err(EmbedError::PointCountMismatch {
            expected: n,
            found: emb.coords.len(),
        });
    }
    if let Some(point) = emb.coords.iter().position(|c| c.len() != emb.dim) {
        return Err(EmbedError::DimMismatch {
            point,
            expected: emb.dim,
            found: emb.coords[point].len(),
        });
    }
    let mut out = emb.clone();
    out.verified = match find_violation(source, emb) {
        None => Verification::Loose,
        Some(v) => Verification::Violated(v),
    };
    Ok(out)
}

fn find_violation(source: &FiniteMetricSpace, emb: &Embedding) -> Option<Violation> {
    let pattern = distance_pattern(source);
    let mut first_by_class: HashMap<usize, (Pair, Rational)> = HashMap::new();
    let mut first_by_image: HashMap<Rational, (Pair, usize)> = HashMap::new();
    for (i, j) in source.pairs() {
        let image = emb.squared_distance(i, j);
        if image == Rational::default() {
            return Some(Violation::Coincident {
                first: i,
                second: j,
            });
        }
        let class = pattern.block_of(i, j);
        if let Some((p, seen)) = first_by_class.get(&class) {
            if seen != &image {
                return Some(Violation::SplitClass {
                    first: *p,
                    second: (i, j),
                });
            }
        } else {
            first_by_class.insert(class, ((i, j), image.clone()));
        }
        if let Some((p, seen_class)) = first_by_image.get(&image) {
            if *seen_class != class {
                return Some(Violation::MergedClass {
                    first: *p,
                    second: (i, j),
                });
            }
        } else {
            first_by_image.insert(image, ((i, j), class));
        }
    }
    None
}
