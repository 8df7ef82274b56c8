//! Monte-Carlo look at how often random finite spaces, after a small
//! injective perturbation, admit `M_{N,M}` witnesses.

use std::time::Instant;

use loometric::gh::find_mnm_partition;
use loometric::random::hypercube_space;
use loometric::rational::{format_rational, ratio};
use loometric::{is_injective, perturb_to_injective, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Resampling attempts per trial before giving up on a space whose smallest
/// distance is too small for `eps`.
const MAX_RESAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    pub trials: usize,
    pub points: usize,
    /// Dimension of the sampling hypercube.
    pub dim: usize,
    pub eps: Rational,
    pub n_grid: Vec<u64>,
    pub m_grid: Vec<u64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridCount {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "M")]
    pub m: u64,
    pub hits: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExperimentReport {
    pub trials: usize,
    pub points: usize,
    pub dim: usize,
    #[serde(serialize_with = "as_rational")]
    pub eps: Rational,
    pub injective_after_perturbation: usize,
    /// Samples redrawn because `eps` was not below a quarter of their
    /// smallest distance.
    pub resampled: usize,
    pub mnm_hits: Vec<GridCount>,
    pub seed: u64,
    /// Wall-clock time; the only field that varies between identical runs.
    pub runtime_ms: u64,
}

fn as_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ExperimentError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error("need at least 2 points per space")]
    TooFewPoints,
    #[error("eps must be positive")]
    NonPositiveEps,
    #[error("no sample with smallest distance above 4 eps after {0} draws")]
    EpsTooLarge(usize),
}

pub fn experiment_genericity(params: &ExperimentParams) -> Result<ExperimentReport, ExperimentError> {
    if params.trials == 0 {
        return Err(ExperimentError::NoTrials);
    }
    if params.points < 2 {
        return Err(ExperimentError::TooFewPoints);
    }
    if params.eps <= Rational::default() {
        return Err(ExperimentError::NonPositiveEps);
    }
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let grid: Vec<(u64, u64)> = params
        .n_grid
        .iter()
        .flat_map(|&n| params.m_grid.iter().map(move |&m| (n, m)))
        .collect();
    let mut hits = vec![0usize; grid.len()];
    let mut injective = 0;
    let mut resampled = 0;
    for trial in 0..params.trials {
        let mut attempts = 0;
        let space = loop {
            let s = hypercube_space(&mut rng, params.points, params.dim);
            let min = s.min_distance().expect("at least two points");
            if params.eps < min * ratio(1, 4) {
                break s;
            }
            attempts += 1;
            resampled += 1;
            if attempts >= MAX_RESAMPLES {
                return Err(ExperimentError::EpsTooLarge(MAX_RESAMPLES));
            }
        };
        let perturb_seed: u64 = rng.random();
        let perturbed = perturb_to_injective(&space, &params.eps, perturb_seed)
            .expect("eps is below a quarter of the smallest distance");
        if is_injective(&perturbed).is_ok() {
            injective += 1;
        }
        for (k, &(n, m)) in grid.iter().enumerate() {
            if find_mnm_partition(&perturbed, n, m).is_some() {
                hits[k] += 1;
            }
        }
        log::debug!("trial {trial}: {} points, injective", perturbed.len());
    }
    Ok(ExperimentReport {
        trials: params.trials,
        points: params.points,
        dim: params.dim,
        eps: params.eps.clone(),
        injective_after_perturbation: injective,
        resampled,
        mnm_hits: grid
            .iter()
            .zip(hits)
            .map(|(&(n, m), hits)| GridCount { n, m, hits })
            .collect(),
        seed: params.seed,
        runtime_ms: started.elapsed().as_millis() as u64,
    })
}
