//! Turning a one-message shuffled protocol into a local one whose analyzer
//! shuffles the reports itself. Each report is then only `eps + ln n`
//! locally private.
//!
//! cargo run --example local_wrapper

use shuffled_dp::applications::shuffled_to_local;
use shuffled_dp::bitsum::{epsilon_of_lambda, BitSumAnalyzer, BitSumRandomizer};
use shuffled_dp::oracle::verify_randomizer_local_dp;
use shuffled_dp::{BitDataset, BitSumParams, PrivacyBudget, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let n = 5_000;
    let params = BitSumParams::for_budget(n, &PrivacyBudget::new(1.0, 1e-6)?)?;
    let local = shuffled_to_local(BitSumRandomizer(params), BitSumAnalyzer(params))?;

    let data = BitDataset::with_ones(n, 1_234)?;
    let source = RandomSource::new(77);
    let reports = local.reports(data.bits(), &source)?;
    let estimate = local.analyze(reports, &source)?;
    println!("true {}, estimate {estimate:.1}", data.sum());

    let eps = epsilon_of_lambda(n, params.lambda(), 1e-6)?;
    let check = verify_randomizer_local_dp(n, params.lambda(), eps + (n as f64).ln())?;
    println!(
        "per-report eps {:.3} <= {:.3}: {}",
        check.eps_measured.unwrap_or(f64::NAN),
        check.eps_tested,
        check.pass
    );
    Ok(())
}
