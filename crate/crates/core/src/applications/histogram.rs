use rand::Rng;

use crate::bitsum::{lambda_star, randomize_bit, BitSumParams};
use crate::error::{Error, Result};
use crate::model::{PrivacyBudget, Transcript};
use crate::protocol::{run_protocol, Analyzer, ProtocolConfig, Randomizer};
use crate::realsum::RoundBit;
use crate::rng::RandomSource;

use super::per_round_estimates;

/// Each user holds one value from `0..domain`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoricalDataset {
    values: Vec<usize>,
    domain: usize,
}

impl CategoricalDataset {
    pub fn new(values: Vec<usize>, domain: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDataset("need at least one user".into()));
        }
        if domain < 2 {
            return Err(Error::InvalidDataset(format!("domain size {domain} < 2")));
        }
        if let Some(v) = values.iter().find(|&&v| v >= domain) {
            return Err(Error::InvalidDataset(format!(
                "value {v} outside 0..{domain}"
            )));
        }
        Ok(Self { values, domain })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.domain];
        for &v in &self.values {
            c[v] += 1;
        }
        c
    }
}

/// One-hot encodes the user's value and randomizes every coordinate.
#[derive(Debug, Clone, Copy)]
pub struct HistogramRandomizer {
    pub params: BitSumParams,
    pub domain: usize,
}

/// Per-bucket debiased counts, clamped to `[0, n]`.
#[derive(Debug, Clone, Copy)]
pub struct HistogramAnalyzer {
    pub params: BitSumParams,
    pub domain: usize,
}

fn config(params: &BitSumParams, domain: usize) -> ProtocolConfig {
    ProtocolConfig {
        n: params.n(),
        lambda: params.lambda(),
        messages_per_user: domain,
    }
}

impl Randomizer for HistogramRandomizer {
    type Input = usize;
    type Message = RoundBit;

    fn randomize<R: Rng + ?Sized>(&self, x: &usize, rng: &mut R, out: &mut Vec<RoundBit>) {
        out.extend((0..self.domain).map(|j| RoundBit {
            round: j as u32,
            bit: randomize_bit(j == *x, &self.params, rng),
        }));
    }

    fn config(&self) -> ProtocolConfig {
        config(&self.params, self.domain)
    }
}

impl Analyzer for HistogramAnalyzer {
    type Message = RoundBit;
    type Output = Vec<f64>;

    fn analyze(&self, messages: &[RoundBit]) -> Result<Vec<f64>> {
        let n = self.params.n() as f64;
        Ok(
            per_round_estimates(messages, self.params.n(), self.domain, self.params.lambda())?
                .into_iter()
                .map(|v| v.clamp(0.0, n))
                .collect(),
        )
    }

    fn config(&self) -> ProtocolConfig {
        config(&self.params, self.domain)
    }
}

/// Per-bucket noise level for `budget`. Changing one user's value flips two
/// one-hot coordinates, so each bucket runs at `(eps/2, delta/2)`.
pub fn histogram_lambda(n: usize, budget: &PrivacyBudget) -> Result<f64> {
    let half = PrivacyBudget::new(budget.eps / 2.0, budget.delta / 2.0)?;
    lambda_star(n, &half)
}

/// Private histogram of `data` under `budget`.
pub fn histogram_protocol(
    data: &CategoricalDataset,
    budget: &PrivacyBudget,
    source: &RandomSource,
) -> Result<Vec<f64>> {
    let lambda = histogram_lambda(data.n(), budget)?;
    histogram_protocol_with_lambda(data, lambda, source).map(|(v, _)| v)
}

/// Runs the histogram protocol with an explicit per-bucket `lambda`.
pub fn histogram_protocol_with_lambda(
    data: &CategoricalDataset,
    lambda: f64,
    source: &RandomSource,
) -> Result<(Vec<f64>, Transcript<RoundBit>)> {
    let params = BitSumParams::new(data.n(), lambda)?;
    let domain = data.domain();
    run_protocol(
        &HistogramRandomizer { params, domain },
        &HistogramAnalyzer { params, domain },
        data.values(),
        source,
    )
}

/// Whether every bucket of `v` is within `n/10` of the true count. A vector
/// of the wrong length never passes.
pub fn check_histogram(data: &CategoricalDataset, v: &[f64]) -> bool {
    if v.len() != data.domain() {
        return false;
    }
    let slack = data.n() as f64 / 10.0;
    data.counts()
        .iter()
        .zip(v)
        .all(|(&c, &e)| (e - c as f64).abs() <= slack)
}
