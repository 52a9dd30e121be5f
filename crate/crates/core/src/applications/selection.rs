use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitsum::{epsilon_of_lambda, lambda_star, randomize_bit, BitSumParams};
use crate::composition::{compose, per_round_budget, RoundBudget};
use crate::error::{Error, Result};
use crate::model::{PrivacyBudget, Transcript};
use crate::protocol::{run_protocol, Analyzer, ProtocolConfig, Randomizer};
use crate::realsum::RoundBit;
use crate::rng::RandomSource;

use super::per_round_estimates;

/// An `n x d` bit matrix, one row per user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrixDataset {
    rows: Vec<Vec<bool>>,
    d: usize,
}

impl BinaryMatrixDataset {
    pub fn new(rows: Vec<Vec<bool>>) -> Result<Self> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || d == 0 {
            return Err(Error::InvalidDataset(
                "need at least one row and one column".into(),
            ));
        }
        if let Some(i) = rows.iter().position(|r| r.len() != d) {
            return Err(Error::InvalidDataset(format!(
                "row {i} has {} columns, expected {d}",
                rows[i].len()
            )));
        }
        Ok(Self { rows, d })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn column_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.d];
        for row in &self.rows {
            for (s, &b) in sums.iter_mut().zip(row) {
                *s += b as usize;
            }
        }
        sums
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelectionRandomizer {
    pub params: BitSumParams,
    pub d: usize,
}

/// Index of the largest raw column estimate; ties go to the lowest index.
#[derive(Debug, Clone, Copy)]
pub struct SelectionAnalyzer {
    pub params: BitSumParams,
    pub d: usize,
}

fn config(params: &BitSumParams, d: usize) -> ProtocolConfig {
    ProtocolConfig {
        n: params.n(),
        lambda: params.lambda(),
        messages_per_user: d,
    }
}

impl Randomizer for SelectionRandomizer {
    type Input = Vec<bool>;
    type Message = RoundBit;

    fn randomize<R: Rng + ?Sized>(&self, x: &Vec<bool>, rng: &mut R, out: &mut Vec<RoundBit>) {
        out.extend(x.iter().enumerate().map(|(j, &b)| RoundBit {
            round: j as u32,
            bit: randomize_bit(b, &self.params, rng),
        }));
    }

    fn config(&self) -> ProtocolConfig {
        config(&self.params, self.d)
    }
}

impl Analyzer for SelectionAnalyzer {
    type Message = RoundBit;
    type Output = usize;

    fn analyze(&self, messages: &[RoundBit]) -> Result<usize> {
        let est = per_round_estimates(messages, self.params.n(), self.d, self.params.lambda())?;
        Ok(argmax_lowest(&est))
    }

    fn config(&self) -> ProtocolConfig {
        config(&self.params, self.d)
    }
}

fn argmax_lowest(v: &[f64]) -> usize {
    let mut best = 0;
    for (j, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = j;
        }
    }
    best
}

/// Budget split and noise level for `d` composed bit-sum rounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionPlan {
    pub rounds: RoundBudget,
    pub lambda: f64,
    /// Guarantee of the composition at the realized per-round epsilon.
    pub composed: PrivacyBudget,
}

/// Splits `budget` evenly over `d` rounds with advanced composition and picks
/// the per-round noise level. The composed guarantee is re-checked.
pub fn selection_plan(n: usize, d: usize, budget: &PrivacyBudget) -> Result<SelectionPlan> {
    let rounds = per_round_budget(budget, d)?;
    let per_round = PrivacyBudget::new(rounds.eps0, rounds.delta0)?;
    let lambda = lambda_star(n, &per_round)?;
    let realized = epsilon_of_lambda(n, lambda, rounds.delta0)?;
    let composed = compose(realized, rounds.delta0, d, rounds.delta_prime)?;
    if !composed.within(budget) {
        return Err(Error::Infeasible(format!(
            "composed guarantee ({}, {}) exceeds ({}, {})",
            composed.eps, composed.delta, budget.eps, budget.delta
        )));
    }
    Ok(SelectionPlan {
        rounds,
        lambda,
        composed,
    })
}

/// Privately selects a column with a near-maximal number of ones.
pub fn selection_protocol(
    data: &BinaryMatrixDataset,
    budget: &PrivacyBudget,
    source: &RandomSource,
) -> Result<usize> {
    let plan = selection_plan(data.n(), data.d(), budget)?;
    selection_protocol_with_lambda(data, plan.lambda, source).map(|(j, _)| j)
}

pub fn selection_protocol_with_lambda(
    data: &BinaryMatrixDataset,
    lambda: f64,
    source: &RandomSource,
) -> Result<(usize, Transcript<RoundBit>)> {
    let params = BitSumParams::new(data.n(), lambda)?;
    let d = data.d();
    run_protocol(
        &SelectionRandomizer { params, d },
        &SelectionAnalyzer { params, d },
        data.rows(),
        source,
    )
}

/// Whether column `j` has at least `max column sum - n/10` ones. Out-of-range
/// indices never pass.
pub fn check_selection(data: &BinaryMatrixDataset, j: usize) -> bool {
    let sums = data.column_sums();
    let Some(&chosen) = sums.get(j) else {
        return false;
    };
    let best = *sums.iter().max().unwrap_or(&0);
    chosen as f64 >= best as f64 - data.n() as f64 / 10.0
}
