//! Classical randomized response, the local-model baseline.

use rand::Rng;

use crate::error::{invalid, Result};
use crate::model::BitDataset;
use crate::protocol::user_stream;
use crate::rng::RandomSource;

/// Probability `1/(e^eps + 1)` that a user reports the opposite bit.
pub fn rr_flip_prob(eps: f64) -> f64 {
    1.0 / (eps.exp() + 1.0)
}

pub fn rr_randomize<R: Rng + ?Sized>(x: bool, eps: f64, rng: &mut R) -> bool {
    x ^ rng.random_bool(rr_flip_prob(eps))
}

/// Debiased count of ones from eps-LDP randomized response reports.
pub fn local_baseline_bitsum(data: &BitDataset, eps: f64, source: &RandomSource) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(invalid("eps", format!("must be positive, got {eps}")));
    }
    let flip = rr_flip_prob(eps);
    let ones = data
        .bits()
        .iter()
        .enumerate()
        .filter(|&(i, &x)| rr_randomize(x, eps, &mut user_stream(source, i).rng()))
        .count();
    let n = data.n() as f64;
    Ok((ones as f64 - n * flip) / (1.0 - 2.0 * flip))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::hockey_stick_slices;
    use approx::assert_relative_eq;

    #[test]
    fn infinite_eps_is_exact() {
        let data = BitDataset::from_u8(&[1, 0, 1, 1, 0, 1]).unwrap();
        for seed in 0..10 {
            let est =
                local_baseline_bitsum(&data, f64::INFINITY, &RandomSource::new(seed)).unwrap();
            assert_eq!(est, 4.0);
        }
    }

    #[test]
    fn likelihood_ratio_is_e_eps() {
        for eps in [0.1, 1.0, 3.0] {
            let p = rr_flip_prob(eps);
            assert_relative_eq!((1.0 - p) / p, eps.exp(), max_relative = 1e-12);
            // two-point laws of R(1) and R(0) on {0, 1}
            let one = [p, 1.0 - p];
            let zero = [1.0 - p, p];
            assert!(hockey_stick_slices(&one, &zero, eps + 1e-12).unwrap() == 0.0);
            assert!(hockey_stick_slices(&one, &zero, eps * 0.99).unwrap() > 0.0);
        }
    }

    #[test]
    fn rejects_nonpositive_eps() {
        let data = BitDataset::from_u8(&[1]).unwrap();
        assert!(local_baseline_bitsum(&data, 0.0, &RandomSource::new(0)).is_err());
    }
}
