//! Seeded inputs shared by the criterion benchmarks in `benches/`.

use loometric::random::{banded_integer_space, clustered_space, hypercube_space};
use loometric::FiniteMetricSpace;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` points in the unit square.
pub fn planar(n: usize, seed: u64) -> FiniteMetricSpace {
    hypercube_space(&mut rng(seed), n, 2)
}

/// Integer distances in `[lo, 2 lo]`; many ties, so equidistant sets are large.
pub fn banded(n: usize, lo: u32, seed: u64) -> FiniteMetricSpace {
    banded_integer_space(&mut rng(seed), n, lo)
}

/// `clusters` tight groups of `per` points.
pub fn clustered(clusters: usize, per: usize, seed: u64) -> FiniteMetricSpace {
    clustered_space(&mut rng(seed), clusters, per, 0.02)
}
