//! The multi-message real-sum protocol.
//!
//! Each user rounds `x` in [0, 1] to `r` bits whose mean is `x` in
//! expectation, then runs every bit through the bit-sum randomizer. The `r`
//! rounds share one shuffler; each message carries its round index so the
//! rounds can be analyzed (and verified) separately, although the estimator
//! only needs the grand total.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitsum::{epsilon_of_lambda, lambda_star, randomize_bit, BitSumParams};
use crate::composition::{compose, RoundBudget};
use crate::error::{invalid, Error, Result};
use crate::model::{PrivacyBudget, RealDataset, Transcript};
use crate::protocol::{run_protocol, Analyzer, ProtocolConfig, Randomizer};
use crate::rng::RandomSource;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealSumParams {
    bits: BitSumParams,
    rounds: usize,
}

impl RealSumParams {
    pub fn new(n: usize, lambda: f64, rounds: usize) -> Result<Self> {
        if rounds == 0 {
            return Err(invalid("rounds", "need at least one message per user"));
        }
        Ok(Self {
            bits: BitSumParams::new(n, lambda)?,
            rounds,
        })
    }

    pub fn n(&self) -> usize {
        self.bits.n()
    }

    pub fn lambda(&self) -> f64 {
        self.bits.lambda()
    }

    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Parameters of each underlying bit-sum round.
    pub fn bit_params(&self) -> BitSumParams {
        self.bits
    }

    pub fn run(
        &self,
        data: &RealDataset,
        source: &RandomSource,
    ) -> Result<(f64, Transcript<RoundBit>)> {
        run_protocol(
            &RealSumRandomizer(*self),
            &RealSumAnalyzer(*self),
            data.values(),
            source,
        )
    }
}

/// One shuffled message: a randomized bit tagged with its round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RoundBit {
    pub round: u32,
    pub bit: bool,
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(invalid("x", format!("must lie in [0, 1], got {x}")))
    }
}

/// Randomized rounding of `x` to `r` bits: with `mu = ceil(x r)` and
/// `p = x r - mu + 1`, bits before `mu` are 1, bit `mu` is `Ber(p)`, the rest 0.
///
/// `x = 0` encodes as all zeros.
pub fn encode_real<R: Rng + ?Sized>(x: f64, r: usize, rng: &mut R) -> Result<Vec<bool>> {
    check_unit(x)?;
    if r == 0 {
        return Err(invalid("r", "must be at least 1"));
    }
    let mut out = vec![false; r];
    encode_into(x, r, rng, &mut out);
    Ok(out)
}

fn encode_into<R: Rng + ?Sized>(x: f64, r: usize, rng: &mut R, out: &mut [bool]) {
    if x == 0.0 {
        return;
    }
    let scaled = x * r as f64;
    // 1-based position of the single random coordinate.
    let mu = (scaled.ceil() as usize).clamp(1, r);
    let p = (scaled - mu as f64 + 1.0).clamp(0.0, 1.0);
    for b in out.iter_mut().take(mu - 1) {
        *b = true;
    }
    out[mu - 1] = rng.random_bool(p);
}

/// Encodes `x` and passes each coordinate through the bit-sum randomizer.
pub fn randomize_real<R: Rng + ?Sized>(
    x: f64,
    params: &RealSumParams,
    rng: &mut R,
) -> Result<Vec<bool>> {
    let mut ys = encode_real(x, params.rounds, rng)?;
    for y in ys.iter_mut() {
        *y = randomize_bit(*y, &params.bits, rng);
    }
    Ok(ys)
}

/// `(1/r) * n/(n-lambda) * (total ones - lambda r / 2)` over all rounds.
///
/// Every round must contribute exactly `n` messages.
pub fn analyze_real(messages: &[RoundBit], params: &RealSumParams) -> Result<f64> {
    let (n, r) = (params.n(), params.rounds);
    if messages.len() != n * r {
        return Err(Error::LengthMismatch {
            expected: n * r,
            actual: messages.len(),
        });
    }
    let mut per_round = vec![0usize; r];
    let mut ones = 0usize;
    for m in messages {
        let slot = per_round
            .get_mut(m.round as usize)
            .ok_or_else(|| Error::InvalidParameter {
                name: "round",
                reason: format!("round {} outside 0..{r}", m.round),
            })?;
        *slot += 1;
        ones += m.bit as usize;
    }
    if let Some((j, &c)) = per_round.iter().enumerate().find(|(_, &c)| c != n) {
        return Err(Error::InvalidParameter {
            name: "messages",
            reason: format!("round {j} holds {c} messages, expected {n}"),
        });
    }
    let (nf, rf, lambda) = (n as f64, r as f64, params.lambda());
    Ok(nf / (nf - lambda) * (ones as f64 - lambda * rf / 2.0) / rf)
}

#[derive(Debug, Clone, Copy)]
pub struct RealSumRandomizer(pub RealSumParams);

#[derive(Debug, Clone, Copy)]
pub struct RealSumAnalyzer(pub RealSumParams);

fn multi_config(p: &RealSumParams) -> ProtocolConfig {
    ProtocolConfig {
        n: p.n(),
        lambda: p.lambda(),
        messages_per_user: p.rounds,
    }
}

impl Randomizer for RealSumRandomizer {
    type Input = f64;
    type Message = RoundBit;

    /// Inputs outside [0, 1] are clamped; `RealDataset` already rejects them.
    fn randomize<R: Rng + ?Sized>(&self, x: &f64, rng: &mut R, out: &mut Vec<RoundBit>) {
        let r = self.0.rounds;
        let mut bits = vec![false; r];
        encode_into(x.clamp(0.0, 1.0), r, rng, &mut bits);
        out.extend(bits.into_iter().enumerate().map(|(j, b)| RoundBit {
            round: j as u32,
            bit: randomize_bit(b, &self.0.bits, rng),
        }));
    }

    fn config(&self) -> ProtocolConfig {
        multi_config(&self.0)
    }
}

impl Analyzer for RealSumAnalyzer {
    type Message = RoundBit;
    type Output = f64;

    fn analyze(&self, messages: &[RoundBit]) -> Result<f64> {
        analyze_real(messages, &self.0)
    }

    fn config(&self) -> ProtocolConfig {
        multi_config(&self.0)
    }
}

/// Default number of rounds: `ceil(eps sqrt(n))`, at least 1 and at most `n`.
pub fn default_rounds(n: usize, eps: f64) -> usize {
    let r = (eps * (n as f64).sqrt()).ceil();
    (r.max(1.0) as usize).min(n.max(1))
}

/// Per-round allocation for `rounds` rounds:
/// `eps0 = eps / sqrt(8 r ln(2/delta))`, `delta0 = delta / (2r)`, `delta' = delta/2`.
pub fn realsum_round_budget(budget: &PrivacyBudget, rounds: usize) -> Result<RoundBudget> {
    if rounds == 0 {
        return Err(invalid("rounds", "must be at least 1"));
    }
    let r = rounds as f64;
    let delta_prime = budget.delta / 2.0;
    let mut delta0 = budget.delta / (2.0 * r);
    while delta_prime + r * delta0 > budget.delta {
        delta0 = delta0.next_down();
    }
    Ok(RoundBudget {
        eps0: budget.eps / (8.0 * r * (2.0 / budget.delta).ln()).sqrt(),
        delta0,
        delta_prime,
    })
}

/// Parameters for `budget` with the default round count.
pub fn realsum_params(n: usize, budget: &PrivacyBudget) -> Result<RealSumParams> {
    realsum_params_with_rounds(n, budget, default_rounds(n, budget.eps))
}

/// Parameters for `budget` with an explicit round count.
///
/// `lambda` is the smallest value certifying `(eps0, delta0)` per round. The
/// composed guarantee of the realized per-round epsilon is re-checked against
/// `budget` before returning.
pub fn realsum_params_with_rounds(
    n: usize,
    budget: &PrivacyBudget,
    rounds: usize,
) -> Result<RealSumParams> {
    let alloc = realsum_round_budget(budget, rounds)?;
    let per_round = PrivacyBudget::new(alloc.eps0, alloc.delta0)?;
    let lambda = lambda_star(n, &per_round).map_err(|e| {
        let e = match e {
            Error::Infeasible(m) => m,
            other => other.to_string(),
        };
        Error::Infeasible(format!(
            "per-round budget (eps0={:.6}, delta0={:.3e}) for r={rounds} at n={n}: {e}",
            alloc.eps0, alloc.delta0
        ))
    })?;
    let realized = epsilon_of_lambda(n, lambda, alloc.delta0)?;
    let total = compose(realized, alloc.delta0, rounds, alloc.delta_prime)?;
    if !total.within(budget) {
        return Err(Error::Infeasible(format!(
            "composition of {rounds} rounds gives ({}, {}) which exceeds ({}, {})",
            total.eps, total.delta, budget.eps, budget.delta
        )));
    }
    RealSumParams::new(n, lambda, rounds)
}

/// The largest round count up to the default for which
/// [`realsum_params_with_rounds`] succeeds.
pub fn realsum_params_max_feasible(n: usize, budget: &PrivacyBudget) -> Result<RealSumParams> {
    let cap = default_rounds(n, budget.eps);
    (1..=cap)
        .rev()
        .find_map(|r| realsum_params_with_rounds(n, budget, r).ok())
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "no round count in 1..={cap} is feasible at n={n}, eps={}, delta={}",
                budget.eps, budget.delta
            ))
        })
}

/// `alpha = sqrt(2)/r sqrt(n ln(2/b)) + n/(n-lambda) sqrt(2 lambda/r ln(2/b))`;
/// the error reaches `alpha` with probability below `2 beta`.
/// Requires `lambda >= (16/9) ln(2/beta)`.
pub fn realsum_accuracy_bound(params: &RealSumParams, beta: f64) -> Result<f64> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(invalid("beta", format!("must lie in (0, 1), got {beta}")));
    }
    let l2 = (2.0 / beta).ln();
    let lambda = params.lambda();
    if lambda < 16.0 / 9.0 * l2 {
        return Err(Error::OutOfRange(format!(
            "lambda={lambda} below (16/9) ln(2/beta)={}",
            16.0 / 9.0 * l2
        )));
    }
    let (n, r) = (params.n() as f64, params.rounds as f64);
    let rounding = 2f64.sqrt() / r * (n * l2).sqrt();
    let noise = n / (n - lambda) * (2.0 * lambda / r * l2).sqrt();
    Ok(rounding + noise)
}
