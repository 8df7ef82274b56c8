//! Finite metric spaces through the lens of loose embeddability.
//!
//! A loose embedding is an injective map that preserves exactly which pairs of
//! points are at equal distance. This crate works with finite spaces carrying
//! exact rational distances and provides:
//!
//! * validation, distance-equality patterns and the isolated-point filtration
//!   ([`space`], [`pattern`], [`strip`]);
//! * equidistant-set obstructions to embedding into `R^d` ([`obstruction`]);
//! * loose embedding construction and exact verification ([`embed`]);
//! * Hausdorff and Gromov-Hausdorff distances and the partition and cover
//!   witnesses used to study generic spaces ([`gh`]).
//!
//! All comparisons are exact. Floats appear only inside the numerical solver,
//! whose output is rationalized and re-checked before it is returned.

pub mod embed;
pub mod gh;
pub mod obstruction;
pub mod pattern;
pub mod random;
pub mod rational;
pub mod space;
pub mod strip;

#[cfg(test)]
pub(crate) mod test_support;

pub use embed::{
    build_dendrogram, embed_line_branching, perturb_to_injective, solve_loose_embedding,
    verify_loose, ClusterTree, Embedding, EmbedError, InfeasibleReport, SolverOptions,
    Verification,
};
pub use gh::{
    check_dimension_witness, check_mnm, cover_order, find_mnm_partition, gh_bounds, gh_exact,
    hausdorff, Correspondence, GhResult, PartitionWitness, Proof,
};
pub use obstruction::{dim_lower_bound, max_regular_simplex, SimplexWitness};
pub use pattern::{distance_pattern, is_injective, Comparison, DistancePattern};
pub use rational::Rational;
pub use space::{validate_metric, FiniteMetricSpace, MetricError, Pair};
pub use strip::{isolation_strip, points_ge_r, StripFiltration};
