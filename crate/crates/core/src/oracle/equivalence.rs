use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::bitsum::{randomize_bit, BitSumParams};
use crate::error::{invalid, Result};
use crate::model::BitDataset;
use crate::rng::RandomSource;

use super::pmf::{c_lambda_pmf, DiscretePmf};

/// Bins whose expected count falls below this are merged with a neighbor.
pub const MIN_EXPECTED: f64 = 5.0;

/// Work is split into this many chunks regardless of thread count, so the
/// sampled counts depend only on the seed.
const CHUNKS: u64 = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub bins: usize,
    pub trials: u64,
}

/// Histogram over `{0, ..., n}` of `sum_i R(x_i)` across `trials` independent
/// runs of the local randomizers on `data`.
pub fn sample_randomizer_sums(
    data: &BitDataset,
    lambda: f64,
    trials: u64,
    source: &RandomSource,
) -> Result<Vec<u64>> {
    let params = BitSumParams::new(data.n(), lambda)?;
    let n = data.n();
    let counts = (0..CHUNKS)
        .into_par_iter()
        .map(|c| {
            let share = trials / CHUNKS + u64::from(c < trials % CHUNKS);
            let mut rng = source.child(c).rng();
            let mut hist = vec![0u64; n + 1];
            for _ in 0..share {
                let s = data
                    .bits()
                    .iter()
                    .filter(|&&x| randomize_bit(x, &params, &mut rng))
                    .count();
                hist[s] += 1;
            }
            hist
        })
        .reduce(
            || vec![0u64; n + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts)
}

/// Pearson goodness-of-fit of observed `counts` against `pmf`, merging
/// adjacent outcomes until each bin expects at least five hits.
pub fn chi_square_gof(counts: &[u64], pmf: &DiscretePmf) -> Result<EquivalenceResult> {
    if counts.len() != pmf.support_size() {
        return Err(invalid(
            "counts",
            format!(
                "{} bins against a support of {}",
                counts.len(),
                pmf.support_size()
            ),
        ));
    }
    let trials: u64 = counts.iter().sum();
    if trials == 0 {
        return Err(invalid("counts", "no observations"));
    }
    let total = trials as f64;
    // An outcome the oracle calls impossible rejects outright.
    let impossible = counts
        .iter()
        .zip(pmf.probs())
        .any(|(&c, &p)| c > 0 && p == 0.0);
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut exp_acc, mut obs_acc) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(pmf.probs()) {
        exp_acc += p * total;
        obs_acc += c as f64;
        if exp_acc >= MIN_EXPECTED {
            bins.push((exp_acc, obs_acc));
            exp_acc = 0.0;
            obs_acc = 0.0;
        }
    }
    match bins.last_mut() {
        Some(last) => {
            last.0 += exp_acc;
            last.1 += obs_acc;
        }
        None => bins.push((exp_acc, obs_acc)),
    }
    let statistic: f64 = if impossible {
        f64::INFINITY
    } else {
        bins.iter()
            .filter(|(e, _)| *e > 0.0)
            .map(|&(e, o)| (o - e).powi(2) / e)
            .sum()
    };
    let dof = bins.len() - 1;
    let p_value = if statistic.is_infinite() {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64)
            .map_err(|e| invalid("dof", e.to_string()))?
            .sf(statistic)
    };
    Ok(EquivalenceResult {
        statistic,
        dof,
        p_value,
        bins: bins.len(),
        trials,
    })
}

/// Simulates the sum of `n` local randomizers on a dataset with `k` ones and
/// tests it against the central algorithm's exact law.
pub fn empirical_equivalence_test(
    n: usize,
    lambda: f64,
    k: usize,
    trials: u64,
    source: &RandomSource,
) -> Result<EquivalenceResult> {
    empirical_equivalence_test_on(&BitDataset::with_ones(n, k)?, lambda, trials, source)
}

/// As [`empirical_equivalence_test`] for an arbitrary arrangement of ones.
pub fn empirical_equivalence_test_on(
    data: &BitDataset,
    lambda: f64,
    trials: u64,
    source: &RandomSource,
) -> Result<EquivalenceResult> {
    if trials < 100_000 {
        return Err(invalid(
            "trials",
            format!("need at least 1e5, got {trials}"),
        ));
    }
    let counts = sample_randomizer_sums(data, lambda, trials, source)?;
    let oracle = c_lambda_pmf(data.sum(), data.n(), lambda)?;
    chi_square_gof(&counts, &oracle)
}
