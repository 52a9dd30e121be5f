use std::io::Write;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use super::{VerifyArgs, EXIT_FAIL, EXIT_OK};
use crate::bitsum::lambda_star;
use crate::error::{invalid, Error, Result};
use crate::model::PrivacyBudget;
use crate::oracle::{
    empirical_equivalence_test, verify_randomizer_local_dp, verify_shuffled_dp_with, OracleOptions,
};
use crate::rng::RandomSource;

/// Significance level of the equivalence test.
pub const EQUIVALENCE_LEVEL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VerifyMode {
    /// Exact (eps, delta) check of the shuffled bit-sum output.
    Shuffled,
    /// Pure-DP check of one randomizer against `eps + ln n`.
    Local,
    /// Chi-square test of simulated randomizer sums against the exact law.
    Equivalence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub mode: String,
    pub n: usize,
    pub lambda: f64,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    pub level: f64,
    pub pass: bool,
}

fn need(x: Option<f64>, name: &'static str) -> Result<f64> {
    x.ok_or_else(|| invalid(name, "required in this mode"))
}

fn lambda_for(args: &VerifyArgs, budget: &PrivacyBudget) -> Result<f64> {
    match args.lambda {
        Some(l) => Ok(l),
        None => lambda_star(args.n, budget),
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, report: &T, pass: bool) -> Result<i32> {
    let line = serde_json::to_string(report).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{line}")?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let n = args.n;
    match args.mode {
        VerifyMode::Shuffled => {
            let budget = PrivacyBudget::new(need(args.eps, "eps")?, need(args.delta, "delta")?)?;
            let lambda = lambda_for(args, &budget)?;
            let opts = OracleOptions {
                max_n: args.max_n,
                ..OracleOptions::default()
            };
            let report = verify_shuffled_dp_with(n, lambda, &budget, &opts)?;
            emit(out, &report, report.pass)
        }
        VerifyMode::Local => {
            let eps = need(args.eps, "eps")?;
            let lambda = match args.lambda {
                Some(l) => l,
                None => lambda_for(args, &PrivacyBudget::new(eps, need(args.delta, "delta")?)?)?,
            };
            let report = verify_randomizer_local_dp(n, lambda, eps + (n as f64).ln())?;
            emit(out, &report, report.pass)
        }
        VerifyMode::Equivalence => {
            let lambda = args.lambda.unwrap_or(n as f64 / 2.0);
            let k = args.k.unwrap_or(n / 3);
            let r = empirical_equivalence_test(
                n,
                lambda,
                k,
                args.trials,
                &RandomSource::new(args.seed),
            )?;
            let pass = r.p_value >= EQUIVALENCE_LEVEL;
            let report = EquivalenceReport {
                mode: "equivalence".into(),
                n,
                lambda,
                k,
                trials: r.trials,
                seed: args.seed,
                statistic: r.statistic,
                dof: r.dof,
                p_value: r.p_value,
                level: EQUIVALENCE_LEVEL,
                pass,
            };
            emit(out, &report, pass)
        }
    }
}
