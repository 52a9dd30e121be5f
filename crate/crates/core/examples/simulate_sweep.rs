//! A reproducible Monte-Carlo sweep over n, writing per-trial CSV files and
//! printing the summary of each run.
//!
//! cargo run --release --example simulate_sweep -- /tmp/sweep

use shuffled_dp::cli::{write_csv, App, ExperimentConfig};

fn main() -> shuffled_dp::Result<()> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "sweep".into());
    std::fs::create_dir_all(&dir)?;
    for n in [1_000, 5_000, 20_000] {
        let cfg = ExperimentConfig {
            app: App::Bitsum,
            n,
            delta: 1e-4,
            trials: 200,
            seed: 42,
            ..ExperimentConfig::default()
        };
        let (records, summary) = shuffled_dp::cli::simulate(&cfg, false)?;
        let path = format!("{dir}/bitsum_n{n}.csv");
        write_csv(&records, std::fs::File::create(&path)?)?;
        println!(
            "n={n:6} lambda={:8.1} rmse={:7.2} alpha={:7.2} empirical beta={:.3} -> {path}",
            summary.lambda,
            summary.errors.rmse,
            summary.alpha.unwrap_or(f64::NAN),
            summary.empirical_beta.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}
