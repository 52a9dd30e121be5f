//! Private selection: find a column of a binary matrix whose number of ones
//! is close to the maximum, running one composed bit-sum per column.
//!
//! cargo run --release --example selection

use shuffled_dp::applications::{check_selection, selection_plan, selection_protocol_with_lambda};
use shuffled_dp::simulation::datasets;
use shuffled_dp::{PrivacyBudget, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let (n, d) = (50_000, 16);
    let budget = PrivacyBudget::new(1.0, 1e-6)?;
    let plan = selection_plan(n, d, &budget)?;
    println!(
        "{d} rounds at eps0 = {:.4}, delta0 = {:.2e}; lambda = {:.0}; composed ({:.4}, {:.2e})",
        plan.rounds.eps0, plan.rounds.delta0, plan.lambda, plan.composed.eps, plan.composed.delta
    );

    let planted = 11;
    let data = datasets::planted_matrix(n, d, planted, n / 5, &RandomSource::new(3))?;
    let (chosen, _) = selection_protocol_with_lambda(&data, plan.lambda, &RandomSource::new(4))?;
    let sums = data.column_sums();
    println!("column sums {sums:?}");
    println!(
        "chose column {chosen} (planted {planted}), within n/10 of the best: {}",
        check_selection(&data, chosen)
    );
    Ok(())
}
