//! Advanced composition and its inverse for splitting a budget across rounds.
//!
//! All logarithms are natural.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::PrivacyBudget;

/// Guarantee of `rounds` adaptively composed (eps0, delta0)-DP mechanisms:
/// `(eps0 (e^eps0 - 1) T + eps0 sqrt(2 T ln(1/delta')), delta' + T delta0)`.
///
/// The returned pair is not validated as a budget; its delta may exceed one
/// for silly inputs.
pub fn compose(eps0: f64, delta0: f64, rounds: usize, delta_prime: f64) -> Result<PrivacyBudget> {
    if rounds == 0 {
        return Err(invalid("rounds", "must be at least 1"));
    }
    if !(eps0 > 0.0) || !eps0.is_finite() {
        return Err(invalid(
            "eps0",
            format!("must be positive and finite, got {eps0}"),
        ));
    }
    if !(delta0 >= 0.0) {
        return Err(invalid(
            "delta0",
            format!("must be non-negative, got {delta0}"),
        ));
    }
    if !(delta_prime > 0.0 && delta_prime < 1.0) {
        return Err(invalid(
            "delta_prime",
            format!("must lie in (0, 1), got {delta_prime}"),
        ));
    }
    let t = rounds as f64;
    let eps = eps0 * eps0.exp_m1() * t + eps0 * (2.0 * t * (1.0 / delta_prime).ln()).sqrt();
    Ok(PrivacyBudget {
        eps,
        delta: delta_prime + t * delta0,
    })
}

/// Per-round parameters whose `rounds`-fold composition fits a target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundBudget {
    pub eps0: f64,
    pub delta0: f64,
    pub delta_prime: f64,
}

impl RoundBudget {
    pub fn composed(&self, rounds: usize) -> Result<PrivacyBudget> {
        compose(self.eps0, self.delta0, rounds, self.delta_prime)
    }
}

/// Splits `target` evenly over `rounds`: half of delta goes to the composition
/// slack, the other half is spread over the rounds, and eps0 is the largest
/// value (to relative precision 1e-9) whose composition stays within target.eps.
pub fn per_round_budget(target: &PrivacyBudget, rounds: usize) -> Result<RoundBudget> {
    if rounds == 0 {
        return Err(invalid("rounds", "must be at least 1"));
    }
    let t = rounds as f64;
    let delta_prime = target.delta / 2.0;
    let mut delta0 = target.delta / (2.0 * t);
    while delta_prime + t * delta0 > target.delta {
        delta0 = delta0.next_down();
    }

    let forward = |e: f64| compose(e, delta0, rounds, delta_prime).map(|b| b.eps);
    // The sqrt term alone reaches target.eps here, so the root lies below.
    let mut hi = target.eps / (2.0 * t * (1.0 / delta_prime).ln()).sqrt();
    let mut lo = 0.0_f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if forward(mid)? <= target.eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    if !(lo > 0.0) {
        return Err(Error::Infeasible(format!(
            "no positive per-round epsilon composes to {} over {rounds} rounds",
            target.eps
        )));
    }
    Ok(RoundBudget {
        eps0: lo,
        delta0,
        delta_prime,
    })
}
