use crate::error::{invalid, Result};

use super::pmf::DiscretePmf;

/// Tight delta of the pair at level `eps`: `sum_t max(0, P(t) - e^eps Q(t))`.
pub fn hockey_stick(p: &DiscretePmf, q: &DiscretePmf, eps: f64) -> Result<f64> {
    hockey_stick_slices(p.probs(), q.probs(), eps)
}

pub fn hockey_stick_slices(p: &[f64], q: &[f64], eps: f64) -> Result<f64> {
    if p.len() != q.len() {
        return Err(invalid(
            "support",
            format!("pmfs have supports of size {} and {}", p.len(), q.len()),
        ));
    }
    Ok(hockey_stick_unchecked(p, q, eps.exp()))
}

pub(crate) fn hockey_stick_unchecked(p: &[f64], q: &[f64], scale: f64) -> f64 {
    p.iter()
        .zip(q)
        .map(|(&a, &b)| (a - scale * b).max(0.0))
        .sum::<f64>()
        .min(1.0)
}
