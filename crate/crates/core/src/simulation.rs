//! Reproducible Monte-Carlo trials.
//!
//! Trial `i` of an experiment seeded with `seed` runs on
//! `RandomSource::new(seed).child(i)`, so a record depends only on its index
//! and trials may execute in any order on any number of threads. Records are
//! always returned in trial-index order.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rng::RandomSource;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub true_value: f64,
    pub estimate: f64,
    pub abs_error: f64,
    /// Wall-clock time of the trial, when timing was requested.
    pub runtime_ms: Option<f64>,
}

/// One trial's ground truth and estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub true_value: f64,
    pub estimate: f64,
}

/// Runs `trials` independent trials of `f`.
pub fn run_trials<F>(trials: u64, seed: u64, timed: bool, f: F) -> Result<Vec<TrialRecord>>
where
    F: Fn(&RandomSource) -> Result<Outcome> + Sync,
{
    let master = RandomSource::new(seed);
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let source = master.child(trial);
            let start = Instant::now();
            let out = f(&source)?;
            let elapsed = start.elapsed().as_secs_f64() * 1e3;
            Ok(TrialRecord {
                trial,
                seed: source.seed,
                true_value: out.true_value,
                estimate: out.estimate,
                abs_error: (out.estimate - out.true_value).abs(),
                runtime_ms: timed.then_some(elapsed),
            })
        })
        .collect()
}

/// Aggregate error statistics of a set of trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    /// Mean signed error (estimate minus truth).
    pub mean_error: f64,
    /// Standard error of `mean_error`.
    pub mean_error_se: f64,
    pub mean_abs_error: f64,
    pub rmse: f64,
    pub max_abs_error: f64,
}

impl Summary {
    pub fn of(records: &[TrialRecord]) -> Self {
        let m = records.len().max(1) as f64;
        let errs: Vec<f64> = records.iter().map(|r| r.estimate - r.true_value).collect();
        let mean = errs.iter().sum::<f64>() / m;
        let var = if records.len() > 1 {
            errs.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (m - 1.0)
        } else {
            0.0
        };
        Self {
            trials: records.len(),
            mean_error: mean,
            mean_error_se: (var / m).sqrt(),
            mean_abs_error: errs.iter().map(|e| e.abs()).sum::<f64>() / m,
            rmse: (errs.iter().map(|e| e * e).sum::<f64>() / m).sqrt(),
            max_abs_error: errs.iter().fold(0.0, |a, e| a.max(e.abs())),
        }
    }
}

/// Fraction of trials whose absolute error is strictly above `alpha`.
pub fn fraction_above(records: &[TrialRecord], alpha: f64) -> f64 {
    fraction_where(records, |r| r.abs_error > alpha)
}

/// Fraction of trials whose absolute error is at least `alpha`.
pub fn fraction_at_least(records: &[TrialRecord], alpha: f64) -> f64 {
    fraction_where(records, |r| r.abs_error >= alpha)
}

fn fraction_where(records: &[TrialRecord], pred: impl Fn(&TrialRecord) -> bool) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| pred(r)).count() as f64 / records.len() as f64
}

/// Synthetic datasets for experiments, generated from their own stream.
pub mod datasets {
    use rand::seq::SliceRandom;
    use rand::Rng;

    use crate::applications::{BinaryMatrixDataset, CategoricalDataset};
    use crate::error::{invalid, Result};
    use crate::model::{BitDataset, RealDataset};
    use crate::rng::RandomSource;

    /// `n` users, `ones` of them holding a one, in a random arrangement.
    pub fn bits(n: usize, ones: usize, source: &RandomSource) -> Result<BitDataset> {
        let data = BitDataset::with_ones(n, ones)?;
        let mut bits = data.bits().to_vec();
        bits.shuffle(&mut source.rng());
        BitDataset::new(bits)
    }

    /// `n` independent uniform draws from [0, 1].
    pub fn uniform_reals(n: usize, source: &RandomSource) -> Result<RealDataset> {
        let mut rng = source.rng();
        RealDataset::new((0..n).map(|_| rng.random::<f64>()).collect())
    }

    /// `n` independent uniform draws from `0..domain`.
    pub fn uniform_categorical(
        n: usize,
        domain: usize,
        source: &RandomSource,
    ) -> Result<CategoricalDataset> {
        let mut rng = source.rng();
        CategoricalDataset::new(
            (0..n).map(|_| rng.random_range(0..domain.max(1))).collect(),
            domain,
        )
    }

    /// An `n x d` matrix where every column holds `n/2` ones except column
    /// `planted`, which holds `n/2 + margin` ones. Each column's ones sit on a
    /// random subset of rows.
    #[allow(clippy::needless_range_loop)]
    pub fn planted_matrix(
        n: usize,
        d: usize,
        planted: usize,
        margin: usize,
        source: &RandomSource,
    ) -> Result<BinaryMatrixDataset> {
        if planted >= d || n / 2 + margin > n {
            return Err(invalid(
                "planted",
                format!("column {planted} of {d} with margin {margin} at n={n}"),
            ));
        }
        let mut rng = source.rng();
        let mut rows = vec![vec![false; d]; n];
        let mut order: Vec<usize> = (0..n).collect();
        for j in 0..d {
            let ones = n / 2 + if j == planted { margin } else { 0 };
            order.shuffle(&mut rng);
            for &i in &order[..ones] {
                rows[i][j] = true;
            }
        }
        BinaryMatrixDataset::new(rows)
    }
}
