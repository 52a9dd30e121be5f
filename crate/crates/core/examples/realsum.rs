//! Private sum of values in [0, 1] using randomized rounding and several
//! bit-sum rounds per user.
//!
//! cargo run --release --example realsum

use shuffled_dp::realsum::{realsum_accuracy_bound, realsum_params, realsum_round_budget};
use shuffled_dp::simulation::datasets;
use shuffled_dp::{PrivacyBudget, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let n = 100_000;
    let budget = PrivacyBudget::new(1.0, 1e-6)?;
    let params = realsum_params(n, &budget)?;
    let rounds = realsum_round_budget(&budget, params.rounds())?;
    println!(
        "r = {} rounds at eps0 = {:.5}, delta0 = {:.2e}, lambda = {:.0}",
        params.rounds(),
        rounds.eps0,
        rounds.delta0,
        params.lambda()
    );

    let data = datasets::uniform_reals(n, &RandomSource::new(1))?;
    let (estimate, transcript) = params.run(&data, &RandomSource::new(2))?;
    println!("{} messages from {n} users", transcript.len());
    println!(
        "true sum {:.2}, estimate {estimate:.2}, bound at failure 10%: {:.2}",
        data.sum(),
        realsum_accuracy_bound(&params, 0.05)?
    );
    Ok(())
}
