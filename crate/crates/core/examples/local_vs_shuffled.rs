//! Error of randomized response in the local model against the shuffled
//! bit-sum at the same epsilon.
//!
//! cargo run --release --example local_vs_shuffled

use shuffled_dp::applications::local_baseline_bitsum;
use shuffled_dp::simulation::{run_trials, Outcome, Summary};
use shuffled_dp::{BitDataset, BitSumParams, PrivacyBudget};

fn main() -> shuffled_dp::Result<()> {
    let data = BitDataset::with_ones(10_000, 5_000)?;
    let truth = data.sum() as f64;
    println!("{:>5} {:>14} {:>16}", "eps", "local RMSE", "shuffled RMSE");
    for eps in [0.25, 0.5, 1.0] {
        let params = BitSumParams::for_budget(data.n(), &PrivacyBudget::new(eps, 1e-6)?)?;
        let shuffled = run_trials(500, 1, false, |s| {
            Ok(Outcome {
                true_value: truth,
                estimate: params.run(&data, s)?.0,
            })
        })?;
        let local = run_trials(500, 2, false, |s| {
            Ok(Outcome {
                true_value: truth,
                estimate: local_baseline_bitsum(&data, eps, s)?,
            })
        })?;
        println!(
            "{eps:5} {:14.2} {:16.2}",
            Summary::of(&local).rmse,
            Summary::of(&shuffled).rmse
        );
    }
    Ok(())
}
