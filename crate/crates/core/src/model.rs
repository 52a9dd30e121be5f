//! Domain types shared by every protocol: privacy budgets, datasets and the
//! analyzer-visible transcript.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An (ε, δ) differential-privacy guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrivacyBudget {
    pub eps: f64,
    pub delta: f64,
}

impl PrivacyBudget {
    pub fn new(eps: f64, delta: f64) -> Result<Self> {
        if !(eps > 0.0) || eps.is_nan() || !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidBudget { eps, delta });
        }
        Ok(Self { eps, delta })
    }

    /// Componentwise `self <= other`.
    pub fn within(&self, other: &PrivacyBudget) -> bool {
        self.eps <= other.eps && self.delta <= other.delta
    }
}

/// Users' private bits, one per user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitDataset {
    bits: Vec<bool>,
}

impl BitDataset {
    pub fn new(bits: Vec<bool>) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidDataset("need at least one user".into()));
        }
        Ok(Self { bits })
    }

    /// Builds a dataset from 0/1 integers, rejecting anything else.
    pub fn from_u8(values: &[u8]) -> Result<Self> {
        let bits = values
            .iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::InvalidDataset(format!("entry {other} is not a bit"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits)
    }

    /// `n` users of which the first `ones` hold a 1.
    pub fn with_ones(n: usize, ones: usize) -> Result<Self> {
        if ones > n {
            return Err(Error::InvalidDataset(format!(
                "{ones} ones among {n} users"
            )));
        }
        Self::new((0..n).map(|i| i < ones).collect())
    }

    pub fn n(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn sum(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Users' private reals in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct RealDataset {
    values: Vec<f64>,
}

impl RealDataset {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidDataset("need at least one user".into()));
        }
        if let Some(bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidDataset(format!("value {bad} outside [0, 1]")));
        }
        Ok(Self { values })
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// The multiset of messages released to the analyzer, in post-shuffle order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transcript<M> {
    pub messages: Vec<M>,
}

impl<M> Transcript<M> {
    pub fn len(&self) -> usize {
        self.messages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.messages.is_empty()
    }
}
