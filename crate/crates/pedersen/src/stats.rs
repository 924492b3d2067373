//! Monte-Carlo estimates with exact binomial confidence intervals, parallel
//! exhaustive enumeration, and a chi-square uniformity check for
//! commitments.

use std::ops::Range;
use std::thread;

use pedersen_core::coins::SeededCoins;
use pedersen_core::engine::{count_seeded, count_successes, EngineError, ExactProbability, TapeSpace};
use pedersen_core::{CommitmentScheme, Game, Group, Pedersen, Scalar};
use sha2::{Digest, Sha256};
use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

/// Two-sided coverage of every reported interval.
pub const CONFIDENCE: f64 = 0.99;

#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub trials: u64,
    pub successes: u64,
    pub point: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn new(successes: u64, trials: u64, seed: u64) -> Self {
        let (ci_low, ci_high) = clopper_pearson(successes, trials, CONFIDENCE);
        Estimate { trials, successes, point: successes as f64 / trials as f64, ci_low, ci_high, seed }
    }

    pub fn contains(&self, p: f64) -> bool {
        self.ci_low <= p && p <= self.ci_high
    }
}

/// Exact (Clopper-Pearson) interval for a binomial proportion.
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0 && successes <= trials);
    let alpha = 1.0 - confidence;
    let (k, n) = (successes as f64, trials as f64);
    let low =
        if successes == 0 { 0.0 } else { Beta::new(k, n - k + 1.0).expect("positive shape").inverse_cdf(alpha / 2.0) };
    let high = if successes == trials {
        1.0
    } else {
        Beta::new(k + 1.0, n - k).expect("positive shape").inverse_cdf(1.0 - alpha / 2.0)
    };
    (low, high)
}

pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

fn split(range: Range<u64>, parts: usize) -> Vec<Range<u64>> {
    let parts = parts.max(1) as u64;
    let len = range.end - range.start;
    (0..parts)
        .map(|i| range.start + len * i / parts..range.start + len * (i + 1) / parts)
        .filter(|r| !r.is_empty())
        .collect()
}

fn sum_over<F>(range: Range<u64>, parts: usize, count: F) -> Result<u64, EngineError>
where
    F: Fn(Range<u64>) -> Result<u64, EngineError> + Sync,
{
    let chunks = split(range, parts);
    if chunks.len() <= 1 {
        return chunks.into_iter().map(&count).sum();
    }
    thread::scope(|s| {
        let handles: Vec<_> = chunks.into_iter().map(|r| s.spawn(|| count(r))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).sum()
    })
}

/// Seeded estimate of a game's success probability.
pub fn estimate(game: &dyn Game, trials: u64, seed: u64) -> Result<Estimate, EngineError> {
    estimate_with_workers(game, trials, seed, default_workers())
}

pub fn estimate_with_workers(game: &dyn Game, trials: u64, seed: u64, parts: usize) -> Result<Estimate, EngineError> {
    assert!(trials >= 1, "at least one trial");
    let successes = sum_over(0..trials, parts, |r| count_seeded(game, seed, r))?;
    Ok(Estimate::new(successes, trials, seed))
}

/// [`pedersen_core::engine::enumerate_exact`] with the tape space split
/// across threads.
pub fn enumerate_parallel(game: &dyn Game, parts: usize) -> Result<ExactProbability, EngineError> {
    let space = TapeSpace::for_game(game)?;
    let successes = sum_over(0..space.total(), parts, |r| count_successes(game, &space, r))?;
    Ok(ExactProbability::new(successes, space.total()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u64,
    pub p_value: f64,
    pub critical: f64,
    pub significance: f64,
}

impl ChiSquare {
    pub fn passed(&self) -> bool {
        self.statistic <= self.critical
    }
}

/// Pearson's test of `counts` against the uniform distribution.
pub fn chi_square_uniform(counts: &[u64], significance: f64) -> ChiSquare {
    assert!(counts.len() >= 2);
    let n: u64 = counts.iter().sum();
    let expected = n as f64 / counts.len() as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = counts.len() as u64 - 1;
    let dist = ChiSquared::new(dof as f64).expect("positive dof");
    ChiSquare {
        statistic,
        dof,
        p_value: dist.sf(statistic),
        critical: dist.inverse_cdf(1.0 - significance),
        significance,
    }
}

/// First byte of SHA-256 over the canonical encoding.
pub fn bucket_of(encoding: &[u8]) -> usize {
    Sha256::digest(encoding)[0] as usize
}

/// Histogram of `samples` commitments to a fixed `m` under a fixed key `h`,
/// each with a fresh seeded opening key, over 256 hash buckets.
pub fn commitment_histogram(group: &Group, m: &Scalar, samples: u64, seed: u64) -> [u64; 256] {
    let ped = Pedersen::new(group.clone());
    let h = ped.gen(&mut SeededCoins::with_stream(seed, u64::MAX)).expect("seeded");
    let mut counts = [0u64; 256];
    for i in 0..samples {
        let pair = ped.commit(&h, m, &mut SeededCoins::with_stream(seed, i)).expect("seeded");
        counts[bucket_of(&group.encode_element(&pair.c))] += 1;
    }
    counts
}
