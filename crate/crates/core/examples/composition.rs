//! Budget accounting with advanced composition: what `T` runs of an
//! `(eps0, delta0)` mechanism cost, and how to split a target budget.
//!
//! cargo run --example composition

use shuffled_dp::{compose, per_round_budget, PrivacyBudget};

fn main() -> shuffled_dp::Result<()> {
    println!("{:>6} {:>10} {:>12}", "rounds", "eps", "delta");
    for t in [1, 10, 100, 1000] {
        let total = compose(0.01, 1e-9, t, 1e-7)?;
        println!("{t:6} {:10.4} {:12.3e}", total.eps, total.delta);
    }

    let target = PrivacyBudget::new(1.0, 1e-6)?;
    println!("\nsplitting ({}, {:e}):", target.eps, target.delta);
    for t in [4, 16, 64, 256] {
        let split = per_round_budget(&target, t)?;
        let back = split.composed(t)?;
        println!(
            "{t:4} rounds: eps0 = {:.5}, delta0 = {:.2e} -> ({:.6}, {:.3e})",
            split.eps0, split.delta0, back.eps, back.delta
        );
    }
    Ok(())
}
