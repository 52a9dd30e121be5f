//! Exact privacy audit of the bit-sum protocol: computes the output law for
//! every pair of neighboring datasets and compares the certified epsilon with
//! the tightest one the exact check accepts.
//!
//! cargo run --release --example verify_privacy

use shuffled_dp::bitsum::{epsilon_of_lambda, lambda_star};
use shuffled_dp::oracle::{
    tight_epsilon, verify_randomizer_local_dp, verify_shuffled_dp, OracleOptions,
};
use shuffled_dp::PrivacyBudget;

fn main() -> shuffled_dp::Result<()> {
    let delta = 1e-6;
    for (n, eps) in [(500, 1.0), (1000, 0.5), (2000, 0.3)] {
        let lambda = lambda_star(n, &PrivacyBudget::new(eps, delta)?)?;
        let certified = epsilon_of_lambda(n, lambda, delta)?;
        let report = verify_shuffled_dp(n, lambda, &PrivacyBudget::new(certified, delta)?)?;
        let tight = tight_epsilon(n, lambda, delta, &OracleOptions::default())?;
        let local = verify_randomizer_local_dp(n, lambda, certified + (n as f64).ln())?;
        println!(
            "n={n:5} lambda={lambda:8.2} certified eps={certified:.4} measured delta={:.2e} pass={} tight eps={tight:.4} local eps={:.3}",
            report.delta_measured,
            report.pass,
            local.eps_measured.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
