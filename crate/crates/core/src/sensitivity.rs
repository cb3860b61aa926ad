//! Seeded weight-perturbation study of a ranking.
//!
//! Each sample multiplies every weight by an independent factor drawn
//! uniformly from `[1 - delta, 1 + delta]`, renormalizes the weights to sum
//! to one and reranks. The generator is ChaCha8 seeded with
//! `ChaCha8Rng::seed_from_u64(seed)`; a draw `u` is `rng.gen::<f64>()` (53
//! random mantissa bits, `u` in `[0, 1)`) and the factor is
//! `1 + delta * (2u - 1)`. Draws are taken sample by sample, criterion by
//! criterion, so a report depends only on `(problem, delta, samples, seed)`.
//!
//! The same draws are replayed at [`FLIP_LADDER_STEPS`] evenly spaced
//! perturbation levels `delta * k / steps` to find the smallest level at
//! which any sample changes the winner.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bellinger::{rank, BellingerError, RankingResult};
use crate::model::DecisionProblem;

pub const FLIP_LADDER_STEPS: u32 = 10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SensitivityError {
    #[error("delta must satisfy 0 <= delta < 1 (got {0})")]
    InvalidDelta(f64),
    #[error("samples must be at least 1")]
    InvalidSamples,
    #[error("weight #{index} must be positive (got {weight})")]
    NonPositiveWeight { index: usize, weight: f64 },
    #[error("no weights to renormalize")]
    NoWeights,
    #[error(transparent)]
    Ranking(#[from] BellingerError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub delta: f64,
    pub samples: usize,
    pub seed: u64,
    pub base_best: String,
    pub base_order: Vec<String>,
    /// Wins per alternative, in declaration order; alternatives that never win are omitted.
    pub winner_histogram: IndexMap<String, usize>,
    /// Perturbation levels replayed for the flip search, ascending.
    pub tested_deltas: Vec<f64>,
    /// Smallest tested level at which some sample changed the winner.
    pub min_flip_delta: Option<f64>,
    /// Per sample: fraction of alternative pairs ordered as in `base_order`.
    pub rank_correlations: Vec<f64>,
}

impl SensitivityReport {
    pub fn wins(&self, alternative: &str) -> usize {
        self.winner_histogram.get(alternative).copied().unwrap_or(0)
    }

    pub fn mean_rank_correlation(&self) -> f64 {
        self.rank_correlations.iter().sum::<f64>() / self.rank_correlations.len() as f64
    }
}

/// Scales positive weights so they sum to one.
pub fn renormalize_weights(weights: &[f64]) -> Result<Vec<f64>, SensitivityError> {
    if weights.is_empty() {
        return Err(SensitivityError::NoWeights);
    }
    if let Some((index, &weight)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| !(**w > 0.0 && w.is_finite()))
    {
        return Err(SensitivityError::NonPositiveWeight { index, weight });
    }
    let sum: f64 = weights.iter().sum();
    Ok(weights.iter().map(|w| w / sum).collect())
}

pub fn perturb_weights(
    problem: &DecisionProblem,
    delta: f64,
    samples: usize,
    seed: u64,
) -> Result<SensitivityReport, SensitivityError> {
    if !(0.0..1.0).contains(&delta) {
        return Err(SensitivityError::InvalidDelta(delta));
    }
    if samples == 0 {
        return Err(SensitivityError::InvalidSamples);
    }
    let base_weights = problem.weights();
    renormalize_weights(&base_weights)?;
    let base = rank(problem)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            base_weights
                .iter()
                .map(|_| 2.0 * rng.gen::<f64>() - 1.0)
                .collect()
        })
        .collect();

    let perturbed = |level: f64, unit: &[f64]| -> Result<RankingResult, SensitivityError> {
        let scaled: Vec<f64> = base_weights
            .iter()
            .zip(unit)
            .map(|(w, u)| w * (1.0 + level * u))
            .collect();
        let weights = renormalize_weights(&scaled)?;
        Ok(rank(&problem.with_weights(&weights))?)
    };

    let mut wins = vec![0usize; problem.alternatives.len()];
    let mut rank_correlations = Vec::with_capacity(samples);
    for unit in &draws {
        let ranking = perturbed(delta, unit)?;
        let winner = problem
            .alternative_index(&ranking.best)
            .expect("winner comes from the problem");
        wins[winner] += 1;
        rank_correlations.push(pairwise_concordance(&base.order, &ranking.order));
    }

    let tested_deltas: Vec<f64> = (1..=FLIP_LADDER_STEPS)
        .map(|k| {
            if k == FLIP_LADDER_STEPS {
                delta
            } else {
                delta * f64::from(k) / f64::from(FLIP_LADDER_STEPS)
            }
        })
        .collect();
    let mut min_flip_delta = None;
    'levels: for &level in &tested_deltas {
        for unit in &draws {
            if perturbed(level, unit)?.best != base.best {
                min_flip_delta = Some(level);
                break 'levels;
            }
        }
    }

    let winner_histogram = problem
        .alternatives
        .iter()
        .zip(&wins)
        .filter(|(_, &count)| count > 0)
        .map(|(a, &count)| (a.id.clone(), count))
        .collect();

    Ok(SensitivityReport {
        delta,
        samples,
        seed,
        base_best: base.best.clone(),
        base_order: base.order.clone(),
        winner_histogram,
        tested_deltas,
        min_flip_delta,
        rank_correlations,
    })
}

/// Fraction of unordered pairs whose relative order agrees between two orderings
/// of the same ids. Returns 1 when fewer than two ids are present.
pub fn pairwise_concordance(base: &[String], other: &[String]) -> f64 {
    let position: IndexMap<&str, usize> = other
        .iter()
        .enumerate()
        .map(|(i, id)| (id.as_str(), i))
        .collect();
    let n = base.len();
    if n < 2 {
        return 1.0;
    }
    let mut agree = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if position[base[i].as_str()] < position[base[j].as_str()] {
                agree += 1;
            }
        }
    }
    agree as f64 / (n * (n - 1) / 2) as f64
}
