//! Small perturbations that make a distance function injective.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::EmbedError;
use crate::pattern::is_injective;
use crate::rational::{ratio, Rational};
use crate::space::FiniteMetricSpace;

const DEFAULT_ATTEMPTS: usize = 64;
const GRID_BITS: u32 = 48;

/// A space within `eps` of the input, entrywise, whose distances are all distinct.
///
/// Every off-diagonal entry gets an independent offset drawn from a fine grid
/// in `[eps/2, eps]`. Offsets in that band can never break the triangle
/// inequality: the two short sides gain at least `eps` together while the
/// long side gains at most `eps`. Draws that still collide are resampled.
///
/// Requires `0 < eps < min_distance / 4`. Already injective inputs are
/// returned unchanged. The identity map between input and output has
/// distortion at most `eps`, so their Gromov-Hausdorff distance is at most
/// `eps / 2`.
pub fn perturb_to_injective(
    space: &FiniteMetricSpace,
    eps: &Rational,
    seed: u64,
) -> Result<FiniteMetricSpace, EmbedError> {
    perturb_to_injective_with(space, eps, seed, DEFAULT_ATTEMPTS)
}

pub fn perturb_to_injective_with(
    space: &FiniteMetricSpace,
    eps: &Rational,
    seed: u64,
    attempts: usize,
) -> Result<FiniteMetricSpace, EmbedError> {
    if !eps.is_positive() {
        return Err(EmbedError::NonPositiveEps);
    }
    if let Some(min) = space.min_distance() {
        let limit = min * ratio(1, 4);
        if eps >= &limit {
            return Err(EmbedError::EpsTooLarge {
                eps: eps.clone(),
                limit,
            });
        }
    }
    if is_injective(space).is_ok() {
        return Ok(space.clone());
    }
    let n = space.len();
    let steps = Rational::from_integer(BigInt::from(1u64 << GRID_BITS));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let mut offsets = vec![Rational::default(); n * n];
        for i in 0..n {
            for j in i + 1..n {
                let u = Rational::from_integer(BigInt::from(rng.random_range(0..=1u64 << GRID_BITS)));
                let offset = eps * (ratio(1, 2) + u / &steps * ratio(1, 2));
                offsets[i * n + j] = offset.clone();
                offsets[j * n + i] = offset;
            }
        }
        let candidate = FiniteMetricSpace::from_fn(space.labels().to_vec(), |i, j| {
            space.dist(i, j) + &offsets[i * n + j]
        });
        if let Ok(out) = candidate {
            if is_injective(&out).is_ok() {
                return Ok(out);
            }
        }
    }
    Err(EmbedError::PerturbationExhausted { attempts })
}

/// Largest entrywise change between two matrices on the same points.
///
/// This is the distortion of the identity correspondence, so half of it
/// bounds the Gromov-Hausdorff distance.
pub fn identity_deviation(a: &FiniteMetricSpace, b: &FiniteMetricSpace) -> Rational {
    assert_eq!(a.len(), b.len(), "spaces must have the same points");
    a.pairs()
        .map(|(i, j)| (a.dist(i, j) - b.dist(i, j)).abs())
        .max()
        .unwrap_or_default()
}
