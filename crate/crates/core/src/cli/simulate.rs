use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{fmt17, App, SimulateArgs, EXIT_FAIL, EXIT_OK};
use crate::applications::{
    histogram_lambda, histogram_protocol_with_lambda, selection_plan,
    selection_protocol_with_lambda,
};
use crate::bitsum::{bitsum_accuracy_bound, lambda_closed_form, lambda_star, BitSumParams};
use crate::error::{invalid, Error, Result};
use crate::model::{BitDataset, PrivacyBudget};
use crate::realsum::{
    default_rounds, realsum_accuracy_bound, realsum_params_with_rounds, RealSumParams,
};
use crate::rng::RandomSource;
use crate::simulation::{
    datasets, fraction_above, fraction_at_least, run_trials, Outcome, Summary, TrialRecord,
};

/// A simulation run. Every field has a default, so a JSON config file only
/// needs the fields it changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub app: App,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub trials: u64,
    pub seed: u64,
    pub beta: f64,
    /// Noise level override (per round or per bucket).
    pub lambda: Option<f64>,
    /// Realsum round override.
    pub rounds: Option<usize>,
    /// Histogram domain size.
    pub domain: usize,
    /// Selection column count.
    pub d: usize,
    /// Ones in the bitsum dataset; defaults to `n/2`.
    pub ones: Option<usize>,
    /// Selection planted margin; defaults to `n/5`.
    pub margin: Option<usize>,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            app: App::Bitsum,
            n: 10_000,
            eps: 1.0,
            delta: 1e-6,
            trials: 100,
            seed: 0,
            beta: 0.05,
            lambda: None,
            rounds: None,
            domain: 32,
            d: 16,
            ones: None,
            margin: None,
            out: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))
    }

    /// Applies every flag that was given on top of `self`.
    pub fn merge(mut self, a: &SimulateArgs) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if let Some(v) = a.$f { self.$f = v; } )* };
        }
        take!(app, n, eps, delta, trials, seed, beta, domain, d);
        if a.lambda.is_some() {
            self.lambda = a.lambda;
        }
        if a.rounds.is_some() {
            self.rounds = a.rounds;
        }
        if a.ones.is_some() {
            self.ones = a.ones;
        }
        if a.margin.is_some() {
            self.margin = a.margin;
        }
        if a.out.is_some() {
            self.out = a.out.clone();
        }
        self
    }

    pub fn validate(&self) -> Result<PrivacyBudget> {
        if self.n == 0 {
            return Err(invalid("n", "must be positive"));
        }
        if self.trials == 0 {
            return Err(invalid("trials", "must be at least 1"));
        }
        if !(self.beta > 0.0 && self.beta < 1.0) {
            return Err(invalid(
                "beta",
                format!("must lie in (0, 1), got {}", self.beta),
            ));
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0 && l < self.n as f64) {
                return Err(invalid("lambda", format!("must lie in [0, n), got {l}")));
            }
        }
        match self.app {
            App::Histogram if self.domain == 0 => {
                return Err(invalid("domain", "must be positive"))
            }
            App::Selection if self.d == 0 => return Err(invalid("d", "must be positive")),
            App::Bitsum if self.ones.is_some_and(|k| k > self.n) => {
                return Err(invalid("ones", "cannot exceed n"))
            }
            _ => {}
        }
        PrivacyBudget::new(self.eps, self.delta)
    }
}

/// Aggregate outcome of a simulation, printed as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationSummary {
    pub app: App,
    pub n: usize,
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub lambda: f64,
    pub rounds: usize,
    #[serde(flatten)]
    pub errors: Summary,
    /// Error threshold the run is judged against, if one applies.
    pub alpha: Option<f64>,
    /// Failure probability allowed at `alpha`.
    pub nominal_beta: f64,
    /// Fraction of trials whose error exceeded `alpha`.
    pub empirical_beta: Option<f64>,
    /// Three binomial standard errors of `nominal_beta`.
    pub slack: f64,
    pub pass: Option<bool>,
}

struct Plan {
    lambda: f64,
    rounds: usize,
    alpha: Option<f64>,
    nominal_beta: f64,
    /// Whether an error equal to `alpha` already counts as a failure.
    inclusive: bool,
}

fn plan(cfg: &ExperimentConfig, budget: &PrivacyBudget) -> Result<Plan> {
    let n = cfg.n;
    let tenth = Some(n as f64 / 10.0);
    Ok(match cfg.app {
        App::Bitsum => {
            let lambda = match cfg.lambda {
                Some(l) => l,
                None => lambda_closed_form(n, budget).or_else(|_| lambda_star(n, budget))?,
            };
            Plan {
                lambda,
                rounds: 1,
                alpha: bitsum_accuracy_bound(n, lambda, cfg.beta).ok(),
                nominal_beta: cfg.beta,
                inclusive: false,
            }
        }
        App::Realsum => {
            let rounds = cfg.rounds.unwrap_or_else(|| default_rounds(n, cfg.eps));
            let params = match cfg.lambda {
                Some(l) => RealSumParams::new(n, l, rounds)?,
                None => realsum_params_with_rounds(n, budget, rounds)?,
            };
            Plan {
                lambda: params.lambda(),
                rounds,
                alpha: realsum_accuracy_bound(&params, cfg.beta).ok(),
                nominal_beta: (2.0 * cfg.beta).min(1.0),
                inclusive: true,
            }
        }
        App::Histogram => Plan {
            lambda: match cfg.lambda {
                Some(l) => l,
                None => histogram_lambda(n, budget)?,
            },
            rounds: cfg.domain,
            alpha: tenth,
            nominal_beta: cfg.beta,
            inclusive: false,
        },
        App::Selection => Plan {
            lambda: match cfg.lambda {
                Some(l) => l,
                None => selection_plan(n, cfg.d, budget)?.lambda,
            },
            rounds: cfg.d,
            alpha: tenth,
            nominal_beta: cfg.beta,
            inclusive: false,
        },
    })
}

/// One trial. Histogram trials report the largest bucket deviation as the
/// estimate against a truth of 0; selection trials report the chosen
/// column's sum against the largest column sum.
fn trial(cfg: &ExperimentConfig, p: &Plan, source: &RandomSource) -> Result<Outcome> {
    let n = cfg.n;
    let data_src = source.child(0);
    let proto_src = source.child(1);
    match cfg.app {
        App::Bitsum => {
            let data = BitDataset::with_ones(n, cfg.ones.unwrap_or(n / 2))?;
            let (estimate, _) = BitSumParams::new(n, p.lambda)?.run(&data, &proto_src)?;
            Ok(Outcome {
                true_value: data.sum() as f64,
                estimate,
            })
        }
        App::Realsum => {
            let data = datasets::uniform_reals(n, &data_src)?;
            let (estimate, _) =
                RealSumParams::new(n, p.lambda, p.rounds)?.run(&data, &proto_src)?;
            Ok(Outcome {
                true_value: data.sum(),
                estimate,
            })
        }
        App::Histogram => {
            let data = datasets::uniform_categorical(n, cfg.domain, &data_src)?;
            let (v, _) = histogram_protocol_with_lambda(&data, p.lambda, &proto_src)?;
            let worst = data
                .counts()
                .iter()
                .zip(&v)
                .fold(0.0f64, |m, (&c, &e)| m.max((e - c as f64).abs()));
            Ok(Outcome {
                true_value: 0.0,
                estimate: worst,
            })
        }
        App::Selection => {
            let planted = data_src.child(1).rng().random_range(0..cfg.d);
            let margin = cfg.margin.unwrap_or(n / 5);
            let data = datasets::planted_matrix(n, cfg.d, planted, margin, &data_src)?;
            let (j, _) = selection_protocol_with_lambda(&data, p.lambda, &proto_src)?;
            let sums = data.column_sums();
            Ok(Outcome {
                true_value: *sums.iter().max().unwrap_or(&0) as f64,
                estimate: sums[j] as f64,
            })
        }
    }
}

/// Runs the experiment described by `cfg`.
pub fn simulate(
    cfg: &ExperimentConfig,
    timed: bool,
) -> Result<(Vec<TrialRecord>, SimulationSummary)> {
    let budget = cfg.validate()?;
    let p = plan(cfg, &budget)?;
    let records = run_trials(cfg.trials, cfg.seed, timed, |s| trial(cfg, &p, s))?;
    let empirical_beta = p.alpha.map(|a| {
        if p.inclusive {
            fraction_at_least(&records, a)
        } else {
            fraction_above(&records, a)
        }
    });
    let b = p.nominal_beta;
    let slack = 3.0 * (b * (1.0 - b) / cfg.trials as f64).sqrt();
    let summary = SimulationSummary {
        app: cfg.app,
        n: cfg.n,
        eps: cfg.eps,
        delta: cfg.delta,
        seed: cfg.seed,
        lambda: p.lambda,
        rounds: p.rounds,
        errors: Summary::of(&records),
        alpha: p.alpha,
        nominal_beta: b,
        empirical_beta,
        slack,
        pass: empirical_beta.map(|e| e <= b + slack),
    };
    Ok((records, summary))
}

/// Writes `records` as CSV. Floats carry 17 significant digits; the runtime
/// column is empty for untimed runs.
pub fn write_csv<W: Write>(records: &[TrialRecord], w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Io(e.to_string());
    csv.write_record([
        "trial",
        "seed",
        "true_value",
        "estimate",
        "abs_error",
        "runtime_ms",
    ])
    .map_err(err)?;
    for r in records {
        csv.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            fmt17(r.true_value),
            fmt17(r.estimate),
            fmt17(r.abs_error),
            r.runtime_ms.map(fmt17).unwrap_or_default(),
        ])
        .map_err(err)?;
    }
    csv.flush()?;
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> Result<i32> {
    let base = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let cfg = base.merge(args);
    let (records, summary) = simulate(&cfg, args.timing)?;
    if let Some(path) = &cfg.out {
        write_csv(&records, File::create(path)?)?;
    }
    let json = serde_json::to_string_pretty(&summary).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out, "{json}")?;
    if let Some(path) = &args.summary {
        std::fs::write(path, format!("{json}\n"))?;
    }
    Ok(if summary.pass == Some(false) {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}
