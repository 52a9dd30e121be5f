//! Statistical check that the shuffled sum of local randomizers has the same
//! law as the central algorithm, plus a negative control.
//!
//! cargo run --release --example equivalence

use shuffled_dp::oracle::{c_lambda_pmf, chi_square_gof, sample_randomizer_sums};
use shuffled_dp::{BitDataset, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let (n, k, lambda) = (30, 10, 15.0);
    let data = BitDataset::with_ones(n, k)?;
    let counts = sample_randomizer_sums(&data, lambda, 1_000_000, &RandomSource::new(9))?;
    for (label, kk) in [("matching", k), ("control ", k + 1)] {
        let r = chi_square_gof(&counts, &c_lambda_pmf(kk, n, lambda)?)?;
        println!(
            "{label} k={kk}: chi2 = {:.1} on {} dof, p = {:.3e}",
            r.statistic, r.dof, r.p_value
        );
    }
    Ok(())
}
