//! Private count of ones with the one-message bit-sum protocol.
//!
//! cargo run --release --example bitsum

use shuffled_dp::bitsum::{
    bitsum_accuracy_bound, epsilon_of_lambda, lambda_closed_form, lambda_star,
};
use shuffled_dp::{BitDataset, BitSumParams, PrivacyBudget, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let n = 10_000;
    let budget = PrivacyBudget::new(1.0, 1e-6)?;

    let closed = lambda_closed_form(n, &budget)?;
    let tight = lambda_star(n, &budget)?;
    println!("noise level: closed form {closed:.1}, smallest certified {tight:.1}");
    println!(
        "certified eps at {tight:.1}: {:.6}",
        epsilon_of_lambda(n, tight, budget.delta)?
    );

    let params = BitSumParams::for_budget(n, &budget)?;
    let data = BitDataset::with_ones(n, 3_141)?;
    let (estimate, transcript) = params.run(&data, &RandomSource::new(2024))?;
    let alpha = bitsum_accuracy_bound(n, params.lambda(), 0.05)?;

    println!("{} shuffled messages", transcript.len());
    println!(
        "true sum {}, estimate {estimate:.2}, 95% error bound {alpha:.2}",
        data.sum()
    );
    Ok(())
}
