//! Private histogram over a categorical domain: one bit-sum instance per
//! bucket on one-hot encodings.
//!
//! cargo run --release --example histogram

use shuffled_dp::applications::{
    check_histogram, histogram_lambda, histogram_protocol_with_lambda,
};
use shuffled_dp::simulation::datasets;
use shuffled_dp::{PrivacyBudget, RandomSource};

fn main() -> shuffled_dp::Result<()> {
    let (n, domain) = (10_000, 12);
    let budget = PrivacyBudget::new(1.0, 1e-6)?;
    let data = datasets::uniform_categorical(n, domain, &RandomSource::new(5))?;
    let lambda = histogram_lambda(n, &budget)?;
    let (estimate, _) = histogram_protocol_with_lambda(&data, lambda, &RandomSource::new(6))?;

    println!("per-bucket lambda {lambda:.1}");
    println!("bucket     true  estimate");
    for (j, (&c, &e)) in data.counts().iter().zip(&estimate).enumerate() {
        println!("{j:6} {c:8} {e:9.1}");
    }
    println!(
        "all buckets within n/10: {}",
        check_histogram(&data, &estimate)
    );
    Ok(())
}
