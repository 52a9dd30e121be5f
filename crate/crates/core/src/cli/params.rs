use std::io::Write;

use serde::Serialize;

use super::{App, ParamsArgs, EXIT_OK};
use crate::applications::{histogram_lambda, selection_plan};
use crate::bitsum::{bitsum_accuracy_bound, epsilon_of_lambda, lambda_closed_form, lambda_star};
use crate::error::{Error, Result};
use crate::model::PrivacyBudget;
use crate::realsum::{
    default_rounds, realsum_accuracy_bound, realsum_params_with_rounds, realsum_round_budget,
};

/// Parameters and bounds for one application and budget.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsReport {
    pub app: App,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub beta: f64,
    /// Closed-form noise level, when its hypotheses hold.
    pub lambda_closed_form: Option<f64>,
    /// Smallest certified noise level (per round or per bucket where relevant).
    pub lambda_star: f64,
    /// Privacy level certified for `lambda_star` at `delta0`.
    pub eps_certified: f64,
    pub rounds: usize,
    pub eps0: f64,
    pub delta0: f64,
    /// Error bound at failure probability `beta` (bitsum, histogram and
    /// selection) or `2 beta` (realsum). Histogram and selection bounds cover
    /// every coordinate at once via a union bound.
    pub accuracy_bound: Option<f64>,
    /// Pure local privacy of a single randomizer message.
    pub eps_local: f64,
    /// `eps_certified + ln n`.
    pub eps_local_bound: f64,
    pub local_check: bool,
}

fn local(n: usize, lambda: f64) -> f64 {
    (2.0 * n as f64 / lambda - 1.0).ln()
}

pub fn params_report(args: &ParamsArgs) -> Result<ParamsReport> {
    let budget = PrivacyBudget::new(args.eps, args.delta)?;
    let n = args.n;
    let (lambda, rounds, eps0, delta0, accuracy) = match args.app {
        App::Bitsum => {
            let lambda = lambda_star(n, &budget)?;
            let acc = bitsum_accuracy_bound(n, lambda, args.beta).ok();
            (lambda, 1, budget.eps, budget.delta, acc)
        }
        App::Realsum => {
            let rounds = args.rounds.unwrap_or_else(|| default_rounds(n, budget.eps));
            let alloc = realsum_round_budget(&budget, rounds)?;
            let params = realsum_params_with_rounds(n, &budget, rounds)?;
            let acc = realsum_accuracy_bound(&params, args.beta).ok();
            (params.lambda(), rounds, alloc.eps0, alloc.delta0, acc)
        }
        App::Histogram => {
            let lambda = histogram_lambda(n, &budget)?;
            // One user's change moves two buckets, so each runs at half budget.
            let acc = bitsum_accuracy_bound(n, lambda, args.beta / 2.0).ok();
            (lambda, 1, budget.eps / 2.0, budget.delta / 2.0, acc)
        }
        App::Selection => {
            if args.d == 0 {
                return Err(Error::InvalidParameter {
                    name: "d",
                    reason: "need at least one column".into(),
                });
            }
            let plan = selection_plan(n, args.d, &budget)?;
            let acc = bitsum_accuracy_bound(n, plan.lambda, args.beta / args.d as f64).ok();
            (
                plan.lambda,
                args.d,
                plan.rounds.eps0,
                plan.rounds.delta0,
                acc,
            )
        }
    };
    let eps_certified = epsilon_of_lambda(n, lambda, delta0)?;
    let eps_local = local(n, lambda);
    let eps_local_bound = eps_certified + (n as f64).ln();
    Ok(ParamsReport {
        app: args.app,
        n,
        eps: args.eps,
        delta: args.delta,
        beta: args.beta,
        lambda_closed_form: lambda_closed_form(n, &PrivacyBudget::new(eps0, delta0)?).ok(),
        lambda_star: lambda,
        eps_certified,
        rounds,
        eps0,
        delta0,
        accuracy_bound: accuracy,
        eps_local,
        eps_local_bound,
        local_check: eps_local <= eps_local_bound,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"))
}

pub fn cmd_params(args: &ParamsArgs, out: &mut dyn Write) -> Result<i32> {
    let r = params_report(args)?;
    if args.json {
        let s = serde_json::to_string_pretty(&r).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{s}")?;
        return Ok(EXIT_OK);
    }
    let lines = [
        format!("app                 {}", r.app.name()),
        format!("n                   {}", r.n),
        format!("budget              eps={} delta={:e}", r.eps, r.delta),
        format!("rounds              {}", r.rounds),
        format!("eps0                {:.6}", r.eps0),
        format!("delta0              {:.6e}", r.delta0),
        format!("lambda closed form  {}", opt(r.lambda_closed_form)),
        format!("lambda numeric      {:.4}", r.lambda_star),
        format!("eps certified       {:.6}", r.eps_certified),
        format!(
            "accuracy bound      {} (beta={})",
            opt(r.accuracy_bound),
            r.beta
        ),
        format!(
            "local eps           {:.4} <= {:.4}: {}",
            r.eps_local,
            r.eps_local_bound,
            if r.local_check { "ok" } else { "VIOLATED" }
        ),
    ];
    for line in lines {
        writeln!(out, "{line}")?;
    }
    Ok(EXIT_OK)
}
