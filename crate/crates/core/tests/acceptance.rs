//! Acceptance criteria. Each criterion prints one `[PASS]` or `[FAIL]` line
//! with the measured quantities. The run fails if a criterion check panics;
//! criterion 4 reports FAIL through its pinned infeasibility path.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::time::Instant;

use rayon::prelude::*;
use shuffled_dp::applications::{
    check_histogram, check_selection, histogram_lambda, histogram_protocol_with_lambda,
    local_baseline_bitsum, selection_plan, selection_protocol_with_lambda,
};
use shuffled_dp::bitsum::{
    bitsum_accuracy_bound, epsilon_of_lambda, lambda_closed_form, lambda_floor, lambda_star,
};
use shuffled_dp::oracle::{
    c_lambda_pmf, chi_square_gof, randomizer_sum_pmf, sample_randomizer_sums, verify_shuffled_dp,
};
use shuffled_dp::realsum::{
    encode_real, realsum_accuracy_bound, realsum_params, realsum_params_max_feasible,
};
use shuffled_dp::simulation::{
    datasets, fraction_above, fraction_at_least, run_trials, Outcome, Summary,
};
use shuffled_dp::{
    compose, per_round_budget, shuffle, BitDataset, BitSumParams, Error, PrivacyBudget,
    RandomSource,
};

fn report(id: u32, name: &str, pass: bool, detail: &str, start: Instant) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] criterion {id}: {name}: {detail} ({:.1}s)",
        start.elapsed().as_secs_f64()
    );
}

const GRID_NS: [usize; 4] = [50, 100, 200, 500];
const GRID_DELTA: f64 = 1e-6;
const GRID_POINTS: usize = 10;

/// Ten evenly spaced noise levels in `[14 ln(4/delta), n)`; empty when the
/// interval is.
fn lambda_grid(n: usize) -> Vec<f64> {
    let floor = lambda_floor(GRID_DELTA);
    let nf = n as f64;
    if floor >= nf {
        return Vec::new();
    }
    (0..GRID_POINTS)
        .map(|i| floor + (nf - floor) * i as f64 / GRID_POINTS as f64)
        .collect()
}

fn criterion_1_exact_dp_of_certified_level() {
    let start = Instant::now();
    let mut checked = 0;
    let mut failures = Vec::new();
    let mut empty = Vec::new();
    for n in GRID_NS {
        let grid = lambda_grid(n);
        if grid.is_empty() {
            empty.push(n);
        }
        for lambda in grid {
            let eps = epsilon_of_lambda(n, lambda, GRID_DELTA).unwrap();
            let r = verify_shuffled_dp(n, lambda, &PrivacyBudget::new(eps, GRID_DELTA).unwrap())
                .unwrap();
            checked += 1;
            if !(r.delta_measured <= GRID_DELTA) {
                failures.push((n, lambda, r.delta_measured));
            }
        }
    }
    let pass = failures.is_empty() && checked > 0;
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "exact DP at eps*(lambda)",
        pass && elapsed < 120.0,
        &format!(
            "{checked} points checked, failures {failures:?}; grid empty (n <= 14 ln(4/delta) = {:.1}) for n in {empty:?}",
            lambda_floor(GRID_DELTA)
        ),
        start,
    );
    assert!(pass, "{failures:?}");
}

fn criterion_2_randomizer_sum_matches_central_law() {
    let start = Instant::now();
    const DRAWS: u64 = 1_000_000;
    const LEVEL: f64 = 1e-3;
    const CONTROL_LEVEL: f64 = 1e-6;
    let mut configs = Vec::new();
    for n in [10usize, 20, 50] {
        for lambda in [n as f64 / 4.0, n as f64 / 2.0, 3.0 * n as f64 / 4.0] {
            for k in [0, n / 3, n] {
                configs.push((n, lambda, k));
            }
        }
    }
    let results: Vec<_> = configs
        .par_iter()
        .enumerate()
        .map(|(i, &(n, lambda, k))| {
            let data = BitDataset::with_ones(n, k).unwrap();
            let counts =
                sample_randomizer_sums(&data, lambda, DRAWS, &RandomSource::new(2000 + i as u64))
                    .unwrap();
            let null = chi_square_gof(&counts, &c_lambda_pmf(k, n, lambda).unwrap()).unwrap();
            let wrong_k = if k < n { k + 1 } else { k - 1 };
            let control =
                chi_square_gof(&counts, &c_lambda_pmf(wrong_k, n, lambda).unwrap()).unwrap();
            (n, lambda, k, null.p_value, control.p_value)
        })
        .collect();
    let null_fail: Vec<_> = results.iter().filter(|r| r.3 < LEVEL).collect();
    let control_fail: Vec<_> = results.iter().filter(|r| r.4 >= CONTROL_LEVEL).collect();
    let min_p = results.iter().map(|r| r.3).fold(1.0, f64::min);
    let max_control = results.iter().map(|r| r.4).fold(0.0, f64::max);
    let pass = null_fail.is_empty() && control_fail.is_empty();
    report(
        2,
        "randomizer sum equals central law",
        pass && start.elapsed().as_secs_f64() < 180.0,
        &format!(
            "{} configs x {DRAWS} draws; min p = {min_p:.4} (level {LEVEL}); max negative-control p = {max_control:.3e} (< {CONTROL_LEVEL})",
            results.len()
        ),
        start,
    );
    assert!(
        pass,
        "null failures {null_fail:?}, control failures {control_fail:?}"
    );
}

fn criterion_3_bitsum_accuracy() {
    let start = Instant::now();
    const N: usize = 10_000;
    const BETA: f64 = 0.05;
    const SLACK: f64 = 0.02;
    const TRIALS: u64 = 2000;
    let budget = PrivacyBudget::new(1.0, 1e-6).unwrap();
    let lambda = lambda_closed_form(N, &budget).unwrap();
    let alpha = bitsum_accuracy_bound(N, lambda, BETA).unwrap();
    let params = BitSumParams::new(N, lambda).unwrap();
    let data = BitDataset::with_ones(N, N / 2).unwrap();
    let records = run_trials(TRIALS, 3, false, |s| {
        Ok(Outcome {
            true_value: data.sum() as f64,
            estimate: params.run(&data, s)?.0,
        })
    })
    .unwrap();
    let frac = fraction_above(&records, alpha);
    let s = Summary::of(&records);
    let mean_ok = s.mean_error.abs() <= 4.0 * s.mean_error_se;
    let pass = frac <= BETA + SLACK && mean_ok;
    report(
        3,
        "bit-sum accuracy bound",
        pass && start.elapsed().as_secs_f64() < 60.0,
        &format!(
            "lambda = {lambda:.3}, alpha = {alpha:.3}, P[err > alpha] = {frac:.4} (<= {}), mean error {:.3} vs 4 SE {:.3}",
            BETA + SLACK,
            s.mean_error,
            4.0 * s.mean_error_se
        ),
        start,
    );
    assert!(pass);
}

fn realsum_failure_rate(
    n: usize,
    params: shuffled_dp::RealSumParams,
    beta: f64,
    trials: u64,
) -> (f64, f64) {
    let alpha = realsum_accuracy_bound(&params, beta).unwrap();
    let records = run_trials(trials, 4, false, |s| {
        let data = datasets::uniform_reals(n, &s.child(0))?;
        Ok(Outcome {
            true_value: data.sum(),
            estimate: params.run(&data, &s.child(1))?.0,
        })
    })
    .unwrap();
    (alpha, fraction_at_least(&records, alpha))
}

/// The default round count `ceil(eps sqrt(n)) = 100` needs a per-round level
/// below what any noise level certifies at this `n`, so parameter selection
/// reports infeasibility. This test pins that outcome and prints the
/// criterion as failed; a supplementary run at the largest feasible round
/// count is reported alongside.
fn criterion_4_realsum_accuracy() {
    let start = Instant::now();
    const N: usize = 10_000;
    const BETA: f64 = 0.05;
    const SLACK: f64 = 0.03;
    const TRIALS: u64 = 1000;
    let budget = PrivacyBudget::new(1.0, 1e-6).unwrap();
    match realsum_params(N, &budget) {
        Ok(params) => {
            let (alpha, frac) = realsum_failure_rate(N, params, BETA, TRIALS);
            let pass = params.rounds() == 100 && frac <= 2.0 * BETA + SLACK;
            report(
                4,
                "real-sum accuracy bound",
                pass,
                &format!(
                    "r = {}, alpha = {alpha:.3}, P[err >= alpha] = {frac:.4}",
                    params.rounds()
                ),
                start,
            );
            assert!(pass);
        }
        Err(e) => {
            report(
                4,
                "real-sum accuracy bound",
                false,
                &format!("r = 100 parameters unavailable: {e}"),
                start,
            );
            let supp = realsum_params_max_feasible(N, &budget).unwrap();
            let (alpha, frac) = realsum_failure_rate(N, supp, BETA, TRIALS);
            println!(
                "       supplementary: r = {}, lambda = {:.1}, alpha = {alpha:.3}, P[err >= alpha] = {frac:.4} (<= {})",
                supp.rounds(),
                supp.lambda(),
                2.0 * BETA + SLACK
            );
            assert!(matches!(e, Error::Infeasible(_)), "unexpected error {e}");
        }
    }
}

fn criterion_5_local_vs_shuffled() {
    let start = Instant::now();
    const N: usize = 10_000;
    const TRIALS: u64 = 2000;
    const RATIO: f64 = 5.0;
    const SHUFFLED_MAX: f64 = 150.0;
    let eps = 1.0;
    let budget = PrivacyBudget::new(eps, 1e-6).unwrap();
    let lambda = lambda_star(N, &budget).unwrap();
    let params = BitSumParams::new(N, lambda).unwrap();
    let data = BitDataset::with_ones(N, N / 2).unwrap();
    let truth = data.sum() as f64;
    let shuffled = run_trials(TRIALS, 5, false, |s| {
        Ok(Outcome {
            true_value: truth,
            estimate: params.run(&data, s)?.0,
        })
    })
    .unwrap();
    let local = run_trials(TRIALS, 6, false, |s| {
        Ok(Outcome {
            true_value: truth,
            estimate: local_baseline_bitsum(&data, eps, s)?,
        })
    })
    .unwrap();
    let (rs, rl) = (Summary::of(&shuffled).rmse, Summary::of(&local).rmse);
    let pass = rl > RATIO * rs && rs <= SHUFFLED_MAX;
    report(
        5,
        "local vs shuffled error",
        pass,
        &format!(
            "lambda = {lambda:.2}, RMSE shuffled = {rs:.2}, local = {rl:.2}, ratio = {:.2}",
            rl / rs
        ),
        start,
    );
    assert!(pass);
}

fn criterion_6_randomizer_local_dp() {
    let start = Instant::now();
    let mut checked = 0;
    let mut violations = Vec::new();
    for n in GRID_NS {
        for lambda in lambda_grid(n) {
            let eps = epsilon_of_lambda(n, lambda, GRID_DELTA).unwrap();
            let l = lambda_star(n, &PrivacyBudget::new(eps, GRID_DELTA).unwrap()).unwrap();
            let local = (2.0 * n as f64 / l - 1.0).ln();
            let bound = epsilon_of_lambda(n, l, GRID_DELTA).unwrap() + (n as f64).ln();
            checked += 1;
            if !(local <= bound) {
                violations.push((n, l, local, bound));
            }
        }
    }
    let pass = violations.is_empty() && checked > 0;
    report(
        6,
        "randomizer local DP",
        pass,
        &format!("{checked} (n, lambda) pairs, violations {violations:?}"),
        start,
    );
    assert!(pass);
}

fn criterion_7_applications() {
    let start = Instant::now();
    const TRIALS: u64 = 200;
    const HIST_RATE: f64 = 0.99;
    const SEL_RATE: f64 = 0.90;
    let budget = PrivacyBudget::new(1.0, 1e-6).unwrap();

    let (n, domain) = (10_000, 32);
    let lambda_h = histogram_lambda(n, &budget).unwrap();
    let hist_ok = (0..TRIALS)
        .into_par_iter()
        .filter(|&t| {
            let src = RandomSource::new(7).child(t);
            let data = datasets::uniform_categorical(n, domain, &src.child(0)).unwrap();
            let (v, _) = histogram_protocol_with_lambda(&data, lambda_h, &src.child(1)).unwrap();
            check_histogram(&data, &v)
        })
        .count() as f64
        / TRIALS as f64;

    let (n, d) = (50_000, 16);
    let plan = selection_plan(n, d, &budget).unwrap();
    let sel_ok = (0..TRIALS)
        .into_par_iter()
        .filter(|&t| {
            let src = RandomSource::new(8).child(t);
            let planted = (t as usize) % d;
            let data = datasets::planted_matrix(n, d, planted, n / 5, &src.child(0)).unwrap();
            let (j, _) = selection_protocol_with_lambda(&data, plan.lambda, &src.child(1)).unwrap();
            check_selection(&data, j)
        })
        .count() as f64
        / TRIALS as f64;

    let pass = hist_ok >= HIST_RATE && sel_ok >= SEL_RATE;
    report(
        7,
        "histogram and selection",
        pass && start.elapsed().as_secs_f64() < 600.0,
        &format!(
            "histogram lambda = {lambda_h:.1}, success {hist_ok:.3} (>= {HIST_RATE}); selection lambda = {:.1}, composed eps = {:.4}, success {sel_ok:.3} (>= {SEL_RATE})",
            plan.lambda, plan.composed.eps
        ),
        start,
    );
    assert!(pass);
}

fn criterion_8_property_suites() {
    let start = Instant::now();
    let mut failed: Vec<&str> = Vec::new();

    let normalized = [10usize, 100, 250, 500].iter().all(|&n| {
        [0, n / 3, n].iter().all(|&k| {
            let p = randomizer_sum_pmf(k, n, 0.4 * n as f64).unwrap();
            (p.total() - 1.0).abs() <= 1e-10
        })
    });
    if !normalized {
        failed.push("pmf normalization");
    }

    let means = [
        (30usize, 10usize, 12.0),
        (200, 77, 150.0),
        (500, 500, 300.0),
    ]
    .iter()
    .all(|&(n, k, l)| {
        let want = k as f64 * (1.0 - l / n as f64) + l / 2.0;
        (randomizer_sum_pmf(k, n, l).unwrap().mean() - want).abs() <= 1e-8
    });
    if !means {
        failed.push("mean identity");
    }

    let shuffles = (0..200u64).all(|s| {
        let v: Vec<u32> = (0..50).map(|i| i % 7).collect();
        let src = RandomSource::new(s);
        let a = shuffle(v.clone(), &src);
        let mut sorted = a.clone();
        sorted.sort();
        let mut orig = v.clone();
        orig.sort();
        sorted == orig && a == shuffle(v, &src)
    });
    if !shuffles {
        failed.push("shuffle multiset and determinism");
    }

    let data = BitDataset::with_ones(1000, 321).unwrap();
    let params = BitSumParams::new(1000, 300.0).unwrap();
    let deterministic = params.run(&data, &RandomSource::new(1)).unwrap()
        == params.run(&data, &RandomSource::new(1)).unwrap();
    if !deterministic {
        failed.push("protocol determinism");
    }

    let draws = 100_000;
    let r = 9;
    let unbiased = [0.0, 0.123, 0.5, 0.999, 1.0].iter().all(|&x| {
        let mut rng = RandomSource::new(12).rng();
        let mean = (0..draws)
            .map(|_| {
                encode_real(x, r, &mut rng)
                    .unwrap()
                    .iter()
                    .filter(|&&b| b)
                    .count() as f64
                    / r as f64
            })
            .sum::<f64>()
            / draws as f64;
        (mean - x).abs() <= 5.0 * (0.25 / (r * r) as f64 / draws as f64).sqrt() + 1e-12
    });
    if !unbiased {
        failed.push("encoder unbiasedness");
    }

    let monotone = [1usize, 5, 20, 100].iter().all(|&t| {
        let a = compose(0.01, 1e-9, t, 1e-7).unwrap();
        let b = compose(0.02, 1e-9, t, 1e-7).unwrap();
        let c = compose(0.01, 1e-9, t + 1, 1e-7).unwrap();
        b.eps > a.eps && c.eps > a.eps && c.delta > a.delta
    }) && [1usize, 10, 100].iter().all(|&t| {
        let target = PrivacyBudget::new(1.0, 1e-6).unwrap();
        per_round_budget(&target, t)
            .unwrap()
            .composed(t)
            .unwrap()
            .within(&target)
    });
    if !monotone {
        failed.push("composition monotonicity");
    }

    let pass = failed.is_empty();
    report(
        8,
        "property suites",
        pass && start.elapsed().as_secs_f64() < 120.0,
        &if pass {
            "all properties hold".to_string()
        } else {
            format!("failed: {failed:?}")
        },
        start,
    );
    assert!(pass);
}

fn main() {
    let criteria: [fn(); 8] = [
        criterion_1_exact_dp_of_certified_level,
        criterion_2_randomizer_sum_matches_central_law,
        criterion_3_bitsum_accuracy,
        criterion_4_realsum_accuracy,
        criterion_5_local_vs_shuffled,
        criterion_6_randomizer_local_dp,
        criterion_7_applications,
        criterion_8_property_suites,
    ];
    let broken = criteria
        .iter()
        .enumerate()
        .filter(|(_, f)| std::panic::catch_unwind(**f).is_err())
        .map(|(i, _)| i + 1)
        .collect::<Vec<_>>();
    if !broken.is_empty() {
        eprintln!("acceptance checks panicked for criteria {broken:?}");
        std::process::exit(1);
    }
}
