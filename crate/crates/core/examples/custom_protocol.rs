//! Plugging a new protocol into the generic runner: a private count of users
//! whose value exceeds a threshold, built on the bit-sum randomizer.
//!
//! cargo run --example custom_protocol

use rand::Rng;
use shuffled_dp::bitsum::{analyze_bits, randomize_bit};
use shuffled_dp::{
    run_protocol, Analyzer, BitSumParams, PrivacyBudget, ProtocolConfig, RandomSource, Randomizer,
};

struct Above {
    threshold: f64,
    params: BitSumParams,
}

impl Randomizer for Above {
    type Input = f64;
    type Message = bool;

    fn randomize<R: Rng + ?Sized>(&self, x: &f64, rng: &mut R, out: &mut Vec<bool>) {
        out.push(randomize_bit(*x > self.threshold, &self.params, rng));
    }

    fn config(&self) -> ProtocolConfig {
        ProtocolConfig {
            n: self.params.n(),
            lambda: self.params.lambda(),
            messages_per_user: 1,
        }
    }
}

struct Count(BitSumParams);

impl Analyzer for Count {
    type Message = bool;
    type Output = f64;

    fn analyze(&self, messages: &[bool]) -> shuffled_dp::Result<f64> {
        analyze_bits(messages, &self.0)
    }

    fn config(&self) -> ProtocolConfig {
        ProtocolConfig {
            n: self.0.n(),
            lambda: self.0.lambda(),
            messages_per_user: 1,
        }
    }
}

fn main() -> shuffled_dp::Result<()> {
    let n = 20_000;
    let mut rng = RandomSource::new(1).rng();
    let incomes: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 100.0).collect();
    let params = BitSumParams::for_budget(n, &PrivacyBudget::new(0.5, 1e-6)?)?;
    let threshold = 80.0;

    let (estimate, _) = run_protocol(
        &Above { threshold, params },
        &Count(params),
        &incomes,
        &RandomSource::new(2),
    )?;
    let truth = incomes.iter().filter(|&&x| x > threshold).count();
    println!("users above {threshold}: true {truth}, private estimate {estimate:.1}");
    Ok(())
}
