//! The one-message bit-sum protocol.
//!
//! Each user keeps their bit with probability `1 - lambda/n` and otherwise
//! submits a fair coin, so about `lambda` users in total send pure noise. The
//! analyzer debiases the count of ones. Privacy comes entirely from the
//! anonymity of the shuffled pool.
//!
//! The second half of this module is the parameter calculus: the explicit
//! privacy level `epsilon_of_lambda` achieved by a given `lambda`, its
//! numerical inverse `lambda_star`, the closed-form upper bound
//! `lambda_closed_form`, and the high-probability error bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{BitDataset, PrivacyBudget, Transcript};
use crate::protocol::{run_protocol, Analyzer, ProtocolConfig, Randomizer};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BitSumParams {
    n: usize,
    lambda: f64,
}

impl BitSumParams {
    /// `lambda` is the expected number of users who randomize; it must lie in
    /// `[0, n)` because the analyzer rescales by `n / (n - lambda)`.
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "need at least one user"));
        }
        if !(lambda >= 0.0 && lambda < n as f64) {
            return Err(invalid(
                "lambda",
                format!("must lie in [0, {n}), got {lambda}"),
            ));
        }
        Ok(Self { n, lambda })
    }

    /// Parameters with the smallest `lambda` certified for `budget`.
    pub fn for_budget(n: usize, budget: &PrivacyBudget) -> Result<Self> {
        Self::new(n, lambda_star(n, budget)?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Probability that a user ignores their datum.
    pub fn randomize_prob(&self) -> f64 {
        self.lambda / self.n as f64
    }

    /// Runs the full protocol (randomize, shuffle, analyze) on `data`.
    pub fn run(&self, data: &BitDataset, source: &RandomSource) -> Result<(f64, Transcript<bool>)> {
        run_protocol(
            &BitSumRandomizer(*self),
            &BitSumAnalyzer(*self),
            data.bits(),
            source,
        )
    }
}

/// Local randomizer: with probability `lambda/n` replace `x` by a fair coin.
pub fn randomize_bit<R: Rng + ?Sized>(x: bool, params: &BitSumParams, rng: &mut R) -> bool {
    if rng.random_bool(params.randomize_prob()) {
        rng.random_bool(0.5)
    } else {
        x
    }
}

/// Debiased estimate `n/(n-lambda) * (sum(ys) - lambda/2)`. Not clamped.
pub fn analyze_bits(ys: &[bool], params: &BitSumParams) -> Result<f64> {
    if ys.len() != params.n {
        return Err(Error::LengthMismatch {
            expected: params.n,
            actual: ys.len(),
        });
    }
    let ones = ys.iter().filter(|&&y| y).count();
    Ok(debias_count(ones as f64, params.n as f64, params.lambda))
}

pub(crate) fn debias_count(ones: f64, n: f64, lambda: f64) -> f64 {
    n / (n - lambda) * (ones - lambda / 2.0)
}

#[derive(Debug, Clone, Copy)]
pub struct BitSumRandomizer(pub BitSumParams);

#[derive(Debug, Clone, Copy)]
pub struct BitSumAnalyzer(pub BitSumParams);

fn one_message_config(p: &BitSumParams) -> ProtocolConfig {
    ProtocolConfig {
        n: p.n,
        lambda: p.lambda,
        messages_per_user: 1,
    }
}

impl Randomizer for BitSumRandomizer {
    type Input = bool;
    type Message = bool;

    fn randomize<R: Rng + ?Sized>(&self, x: &bool, rng: &mut R, out: &mut Vec<bool>) {
        out.push(randomize_bit(*x, &self.0, rng));
    }

    fn config(&self) -> ProtocolConfig {
        one_message_config(&self.0)
    }
}

impl Analyzer for BitSumAnalyzer {
    type Message = bool;
    type Output = f64;

    fn analyze(&self, messages: &[bool]) -> Result<f64> {
        analyze_bits(messages, &self.0)
    }

    fn config(&self) -> ProtocolConfig {
        one_message_config(&self.0)
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < 1.0 {
        Ok(())
    } else {
        Err(invalid("delta", format!("must lie in (0, 1), got {delta}")))
    }
}

/// Smallest `lambda` for which `epsilon_of_lambda` is defined: `14 ln(4/delta)`.
pub fn lambda_floor(delta: f64) -> f64 {
    14.0 * (4.0 / delta).ln()
}

/// Privacy level certified for `lambda` noisy users out of `n` at failure
/// probability `delta`:
///
/// `sqrt(32 ln(4/d) / m) * (1 - m/n)` with `m = lambda - sqrt(2 lambda ln(2/d))`.
///
/// Valid for `14 ln(4/delta) <= lambda <= n`.
pub fn epsilon_of_lambda(n: usize, lambda: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let floor = lambda_floor(delta);
    if !(lambda >= floor) {
        return Err(Error::OutOfRange(format!(
            "lambda={lambda} is below the validity floor 14 ln(4/delta)={floor}"
        )));
    }
    if lambda > n as f64 {
        return Err(Error::OutOfRange(format!("lambda={lambda} exceeds n={n}")));
    }
    Ok(epsilon_of_lambda_unchecked(n as f64, lambda, delta))
}

fn epsilon_of_lambda_unchecked(n: f64, lambda: f64, delta: f64) -> f64 {
    let m = lambda - (2.0 * lambda * (2.0 / delta).ln()).sqrt();
    (32.0 * (4.0 / delta).ln() / m).sqrt() * (1.0 - m / n)
}

/// Closed-form `lambda` sufficient for `budget`:
/// `64 ln(4/d) / eps^2` when `eps >= sqrt(192 ln(4/d) / n)`, and
/// `n - eps n^{3/2} / sqrt(432 ln(4/d))` otherwise.
///
/// Only defined for `n >= 14 ln(4/d)` and `sqrt(3456) ln(4/d) / n < eps <= 1`;
/// outside that range use [`lambda_star`] or relax the budget.
pub fn lambda_closed_form(n: usize, budget: &PrivacyBudget) -> Result<f64> {
    let nf = n as f64;
    let l4 = (4.0 / budget.delta).ln();
    if nf < 14.0 * l4 {
        return Err(Error::OutOfRange(format!(
            "n={n} is below 14 ln(4/delta)={}",
            14.0 * l4
        )));
    }
    let eps_min = 3456f64.sqrt() * l4 / nf;
    if !(budget.eps > eps_min && budget.eps <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "eps={} outside ({eps_min}, 1]",
            budget.eps
        )));
    }
    let crossover = (192.0 * l4 / nf).sqrt();
    let lambda = if budget.eps >= crossover {
        64.0 / (budget.eps * budget.eps) * l4
    } else {
        nf - budget.eps * nf.powf(1.5) / (432.0 * l4).sqrt()
    };
    Ok(lambda)
}

/// The smallest `lambda` in `[14 ln(4/d), n]` with `epsilon_of_lambda <= eps`,
/// found by bisection to absolute tolerance `1e-6 n`.
///
/// The returned value always satisfies `epsilon_of_lambda(lambda) <= eps`.
/// Fails when even `lambda = n` does not certify `eps`.
pub fn lambda_star(n: usize, budget: &PrivacyBudget) -> Result<f64> {
    check_delta(budget.delta)?;
    let nf = n as f64;
    let floor = lambda_floor(budget.delta);
    if nf < floor {
        return Err(Error::Infeasible(format!(
            "n={n} is below the minimum noise level 14 ln(4/delta)={floor:.3}"
        )));
    }
    let eps_at = |l: f64| epsilon_of_lambda_unchecked(nf, l, budget.delta);
    if eps_at(nf) > budget.eps {
        return Err(Error::Infeasible(format!(
            "eps={} is below the best certified level {} at n={n}",
            budget.eps,
            eps_at(nf)
        )));
    }
    if eps_at(floor) <= budget.eps {
        return Ok(floor);
    }
    let (mut lo, mut hi) = (floor, nf);
    let tol = 1e-6 * nf;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if eps_at(mid) <= budget.eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Bracketing must survive bisection; a violation means the certified
    // curve is not monotone on this interval.
    if !(eps_at(lo) > budget.eps && eps_at(hi) <= budget.eps) {
        return Err(Error::Infeasible(format!(
            "bisection lost its bracket at [{lo}, {hi}]"
        )));
    }
    Ok(hi)
}

/// Error `alpha = sqrt(2 lambda ln(2/beta)) * n/(n-lambda)` exceeded with
/// probability at most `beta`. Requires `n > lambda >= 2 ln(2/beta)`.
pub fn bitsum_accuracy_bound(n: usize, lambda: f64, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    let nf = n as f64;
    let l2 = (2.0 / beta).ln();
    if !(lambda >= 2.0 * l2 && lambda < nf) {
        return Err(Error::OutOfRange(format!(
            "need n > lambda >= 2 ln(2/beta)={}, got n={n}, lambda={lambda}",
            2.0 * l2
        )));
    }
    Ok((2.0 * lambda * l2).sqrt() * nf / (nf - lambda))
}
