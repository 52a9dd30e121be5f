//! Protocols built from the bit-sum protocol, plus baselines.
//!
//! Multi-round constructions send one tagged bit per round through a single
//! shuffle; the analyzer groups messages by tag.

mod histogram;
mod local;
mod selection;
mod wrapper;

pub use histogram::{
    check_histogram, histogram_lambda, histogram_protocol, histogram_protocol_with_lambda,
    CategoricalDataset, HistogramAnalyzer, HistogramRandomizer,
};
pub use local::{local_baseline_bitsum, rr_flip_prob, rr_randomize};
pub use selection::{
    check_selection, selection_plan, selection_protocol, selection_protocol_with_lambda,
    BinaryMatrixDataset, SelectionAnalyzer, SelectionPlan, SelectionRandomizer,
};
pub use wrapper::{shuffled_to_local, LocalProtocol};

use crate::bitsum::debias_count;
use crate::error::{Error, Result};
use crate::realsum::RoundBit;

/// Debiased per-round counts from a pool of `rounds * n` tagged bits.
pub(crate) fn per_round_estimates(
    messages: &[RoundBit],
    n: usize,
    rounds: usize,
    lambda: f64,
) -> Result<Vec<f64>> {
    if messages.len() != n * rounds {
        return Err(Error::LengthMismatch {
            expected: n * rounds,
            actual: messages.len(),
        });
    }
    let mut seen = vec![0usize; rounds];
    let mut ones = vec![0usize; rounds];
    for m in messages {
        let j = m.round as usize;
        if j >= rounds {
            return Err(Error::InvalidParameter {
                name: "round",
                reason: format!("round {j} outside 0..{rounds}"),
            });
        }
        seen[j] += 1;
        ones[j] += m.bit as usize;
    }
    if let Some(j) = seen.iter().position(|&c| c != n) {
        return Err(Error::InvalidParameter {
            name: "messages",
            reason: format!("round {j} holds {} messages, expected {n}", seen[j]),
        });
    }
    Ok(ones
        .into_iter()
        .map(|c| debias_count(c as f64, n as f64, lambda))
        .collect())
}
