use serde::{Deserialize, Serialize};
use statrs::function::factorial::ln_binomial;

use crate::error::{invalid, Error, Result};

/// An exact probability mass function over `{0, ..., n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscretePmf {
    probs: Vec<f64>,
}

impl DiscretePmf {
    /// Accepts non-negative weights summing to one within 1e-10.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid("probs", "empty support"));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0) || !p.is_finite()) {
            return Err(invalid("probs", format!("negative or non-finite mass {p}")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(invalid("probs", format!("mass sums to {total}")));
        }
        Ok(Self { probs })
    }

    /// A point mass at `t` on `{0, ..., n}`.
    pub fn point(n: usize, t: usize) -> Self {
        let mut probs = vec![0.0; n + 1];
        probs[t] = 1.0;
        Self { probs }
    }

    pub(crate) fn from_raw(probs: Vec<f64>) -> Self {
        Self { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support_size(&self) -> usize {
        self.probs.len()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(t, p)| t as f64 * p)
            .sum()
    }
}

/// `ln P[Bin(n, p) = k]`, `-inf` outside the support.
pub fn ln_binomial_pmf(n: usize, k: usize, p: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if p <= 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if p >= 1.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    ln_binomial(n as u64, k as u64) + k as f64 * p.ln() + (n - k) as f64 * (-p).ln_1p()
}

/// The full `Bin(n, p)` pmf.
pub fn binomial_pmf(n: usize, p: f64) -> Vec<f64> {
    (0..=n).map(|k| ln_binomial_pmf(n, k, p).exp()).collect()
}

/// `P[h of the s drawn users hold a one]` when `k` of `n` users hold a one.
pub fn hypergeometric_pmf(n: usize, k: usize, s: usize, h: usize) -> f64 {
    if h > k || h > s || s - h > n - k || s > n {
        return 0.0;
    }
    (ln_binomial(k as u64, h as u64) + ln_binomial((n - k) as u64, (s - h) as u64)
        - ln_binomial(n as u64, s as u64))
    .exp()
}

fn check_args(k: usize, n: usize, lambda: f64) -> Result<()> {
    if n == 0 {
        return Err(invalid("n", "need at least one user"));
    }
    if k > n {
        return Err(Error::OutOfRange(format!("k={k} exceeds n={n}")));
    }
    if !(lambda >= 0.0 && lambda <= n as f64) {
        return Err(Error::OutOfRange(format!(
            "lambda={lambda} outside [0, {n}]"
        )));
    }
    Ok(())
}

/// Law of the central algorithm on any dataset with `k` ones: a random set of
/// `s ~ Bin(n, lambda/n)` users is replaced by fair coins, so
///
/// `P[y = t] = sum_s Bin(n, lambda/n)(s) sum_h Hyp(n, k, s)(h) Bin(s, 1/2)(t - (k - h))`.
///
/// This is a direct O(n^3) evaluation of the mixture; `randomizer_sum_pmf`
/// computes the same law from the local randomizers in O(n^2).
pub fn c_lambda_pmf(k: usize, n: usize, lambda: f64) -> Result<DiscretePmf> {
    check_args(k, n, lambda)?;
    let p = lambda / n as f64;
    let mut probs = vec![0.0; n + 1];
    for s in 0..=n {
        let ln_ws = ln_binomial_pmf(n, s, p);
        if ln_ws == f64::NEG_INFINITY {
            continue;
        }
        let coins: Vec<f64> = (0..=s)
            .map(|b| (ln_binomial(s as u64, b as u64) - s as f64 * std::f64::consts::LN_2).exp())
            .collect();
        let h_lo = s.saturating_sub(n - k);
        let h_hi = s.min(k);
        for h in h_lo..=h_hi {
            let ln_w = ln_ws
                + ln_binomial(k as u64, h as u64)
                + ln_binomial((n - k) as u64, (s - h) as u64)
                - ln_binomial(n as u64, s as u64);
            let w = ln_w.exp();
            if w == 0.0 {
                continue;
            }
            let base = k - h;
            for (b, c) in coins.iter().enumerate() {
                probs[base + b] += w * c;
            }
        }
    }
    Ok(DiscretePmf::from_raw(probs))
}

/// Law of `sum_i R(x_i)` over independent local randomizers when `k` users
/// hold a one: `Bin(k, 1 - q) + Bin(n - k, q)` with `q = lambda / (2n)`.
pub fn randomizer_sum_pmf(k: usize, n: usize, lambda: f64) -> Result<DiscretePmf> {
    check_args(k, n, lambda)?;
    let q = lambda / (2.0 * n as f64);
    Ok(DiscretePmf::from_raw(convolve(
        &binomial_pmf(k, 1.0 - q),
        &binomial_pmf(n - k, q),
    )))
}

pub(crate) fn convolve(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0.0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}
