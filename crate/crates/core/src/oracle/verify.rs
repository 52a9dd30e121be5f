use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::PrivacyBudget;

use super::divergence::hockey_stick_unchecked;
use super::pmf::{binomial_pmf, c_lambda_pmf, convolve};

/// Largest `n` accepted by the exact shuffled check unless overridden.
pub const DEFAULT_EXACT_LIMIT: usize = 2000;

/// How the per-count output laws are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PmfRoute {
    /// Convolution of the users' independent randomizer outputs, O(n^2) per pair.
    Randomizers,
    /// The central algorithm's replaced-set mixture, O(n^3) per count.
    CentralMixture,
}

#[derive(Debug, Clone, Copy)]
pub struct OracleOptions {
    pub max_n: usize,
    pub route: PmfRoute,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            max_n: DEFAULT_EXACT_LIMIT,
            route: PmfRoute::Randomizers,
        }
    }
}

/// The neighboring pair attaining the reported delta, in the order
/// `delta(M(first) || M(second))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NeighborPair {
    /// Datasets with `ones` and `ones_prime` ones (differing in one user).
    Counts { ones: usize, ones_prime: usize },
    /// Single-user inputs.
    Inputs { x: u8, x_prime: u8 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpReport {
    pub mode: String,
    pub n: usize,
    pub lambda: f64,
    pub eps_tested: f64,
    pub delta_measured: f64,
    pub delta_allowed: f64,
    pub worst_pair: NeighborPair,
    /// Exact privacy-loss bound, when the check yields one (local mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_measured: Option<f64>,
    pub pass: bool,
}

fn check_n_lambda(n: usize, lambda: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "need at least one user"));
    }
    if !(lambda >= 0.0 && lambda <= n as f64) {
        return Err(Error::OutOfRange(format!(
            "lambda={lambda} outside [0, {n}]"
        )));
    }
    Ok(())
}

/// Output laws of the shuffled sum for the neighboring counts `(k, k+1)`,
/// for every `k` in `0..n`.
fn neighbor_laws(n: usize, lambda: f64, route: PmfRoute) -> Result<Vec<(Vec<f64>, Vec<f64>)>> {
    match route {
        PmfRoute::Randomizers => {
            let q = lambda / (2.0 * n as f64);
            Ok((0..n)
                .into_par_iter()
                .map(|k| {
                    // The other n-1 users: k ones and n-1-k zeros.
                    let rest = convolve(&binomial_pmf(k, 1.0 - q), &binomial_pmf(n - 1 - k, q));
                    let with = |p_one: f64| convolve(&rest, &[1.0 - p_one, p_one]);
                    (with(q), with(1.0 - q))
                })
                .collect())
        }
        PmfRoute::CentralMixture => {
            let laws = (0..=n)
                .into_par_iter()
                .map(|k| c_lambda_pmf(k, n, lambda).map(|p| p.probs().to_vec()))
                .collect::<Result<Vec<_>>>()?;
            Ok(laws
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect())
        }
    }
}

fn worst_delta(laws: &[(Vec<f64>, Vec<f64>)], eps: f64) -> (f64, NeighborPair) {
    let scale = eps.exp();
    let per_pair: Vec<(f64, NeighborPair)> = laws
        .par_iter()
        .enumerate()
        .map(|(k, (lo, hi))| {
            let up = hockey_stick_unchecked(lo, hi, scale);
            let down = hockey_stick_unchecked(hi, lo, scale);
            if down > up {
                (
                    down,
                    NeighborPair::Counts {
                        ones: k + 1,
                        ones_prime: k,
                    },
                )
            } else {
                (
                    up,
                    NeighborPair::Counts {
                        ones: k,
                        ones_prime: k + 1,
                    },
                )
            }
        })
        .collect();
    // First maximum wins, so the result does not depend on thread scheduling.
    per_pair.into_iter().fold(
        (
            f64::NEG_INFINITY,
            NeighborPair::Counts {
                ones: 0,
                ones_prime: 1,
            },
        ),
        |best, cur| {
            if cur.0 > best.0 {
                cur
            } else {
                best
            }
        },
    )
}

/// Exact (eps, delta) check of the shuffled bit-sum protocol with the default
/// options.
pub fn verify_shuffled_dp(n: usize, lambda: f64, budget: &PrivacyBudget) -> Result<DpReport> {
    verify_shuffled_dp_with(n, lambda, budget, &OracleOptions::default())
}

/// Scans every neighboring count pair in both directions and reports the
/// largest hockey-stick divergence at `budget.eps`.
pub fn verify_shuffled_dp_with(
    n: usize,
    lambda: f64,
    budget: &PrivacyBudget,
    options: &OracleOptions,
) -> Result<DpReport> {
    check_n_lambda(n, lambda)?;
    if n > options.max_n {
        return Err(Error::GuardExceeded {
            n,
            limit: options.max_n,
        });
    }
    let laws = neighbor_laws(n, lambda, options.route)?;
    let (delta, pair) = worst_delta(&laws, budget.eps);
    Ok(DpReport {
        mode: "shuffled".into(),
        n,
        lambda,
        eps_tested: budget.eps,
        delta_measured: delta,
        delta_allowed: budget.delta,
        worst_pair: pair,
        eps_measured: None,
        pass: delta <= budget.delta,
    })
}

/// Smallest epsilon at which the exact shuffled delta is at most `delta`,
/// to relative precision 1e-9. Infinite when no finite epsilon (up to 700)
/// suffices, e.g. with `lambda = 0`.
pub fn tight_epsilon(n: usize, lambda: f64, delta: f64, options: &OracleOptions) -> Result<f64> {
    check_n_lambda(n, lambda)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid("delta", format!("must lie in (0, 1), got {delta}")));
    }
    if n > options.max_n {
        return Err(Error::GuardExceeded {
            n,
            limit: options.max_n,
        });
    }
    let laws = neighbor_laws(n, lambda, options.route)?;
    let ok = |eps: f64| worst_delta(&laws, eps).0 <= delta;
    if ok(0.0) {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while !ok(hi) {
        hi *= 2.0;
        if hi > 700.0 {
            return Ok(f64::INFINITY);
        }
    }
    let mut lo = 0.0;
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Pure-DP check of the bit-sum randomizer on its own (no shuffler).
///
/// The randomizer reports `x` with probability `1 - lambda/(2n)`, so its
/// privacy loss is exactly `ln(2n/lambda - 1)`. The report passes iff that
/// loss is at most `eps_target`, equivalently iff the two-point hockey-stick
/// divergence at `eps_target` vanishes.
pub fn verify_randomizer_local_dp(n: usize, lambda: f64, eps_target: f64) -> Result<DpReport> {
    check_n_lambda(n, lambda)?;
    if !(eps_target >= 0.0) {
        return Err(invalid(
            "eps_target",
            format!("must be non-negative, got {eps_target}"),
        ));
    }
    let flip = lambda / (2.0 * n as f64);
    let eps_measured = if lambda == 0.0 {
        f64::INFINITY
    } else {
        (2.0 * n as f64 / lambda - 1.0).ln()
    };
    let one = [flip, 1.0 - flip];
    let zero = [1.0 - flip, flip];
    let scale = eps_target.exp();
    let up = hockey_stick_unchecked(&one, &zero, scale);
    let down = hockey_stick_unchecked(&zero, &one, scale);
    let (delta, pair) = if down > up {
        (down, NeighborPair::Inputs { x: 0, x_prime: 1 })
    } else {
        (up, NeighborPair::Inputs { x: 1, x_prime: 0 })
    };
    Ok(DpReport {
        mode: "local".into(),
        n,
        lambda,
        eps_tested: eps_target,
        delta_measured: delta,
        delta_allowed: 0.0,
        worst_pair: pair,
        eps_measured: Some(eps_measured),
        pass: eps_measured <= eps_target,
    })
}
