//! Monte-Carlo behaviour of the protocols and the shuffler.

use shuffled_dp::applications::{
    check_histogram, histogram_protocol_with_lambda, local_baseline_bitsum, shuffled_to_local,
    HistogramAnalyzer, HistogramRandomizer,
};
use shuffled_dp::bitsum::{epsilon_of_lambda, randomize_bit, BitSumAnalyzer, BitSumRandomizer};
use shuffled_dp::oracle::verify_shuffled_dp;
use shuffled_dp::realsum::{encode_real, realsum_params_max_feasible, realsum_round_budget};
use shuffled_dp::simulation::{datasets, run_trials, Outcome, Summary};
use shuffled_dp::{
    compose, run_protocol, shuffle, BitDataset, BitSumParams, PrivacyBudget, RandomSource,
    RealSumParams,
};

#[test]
fn randomize_bit_two_point_law() {
    let params = BitSumParams::new(10, 5.0).unwrap();
    let mut rng = RandomSource::new(3).rng();
    let draws = 1_000_000;
    for x in [true, false] {
        let ones = (0..draws)
            .filter(|_| randomize_bit(x, &params, &mut rng))
            .count() as f64
            / draws as f64;
        let expected = if x { 0.75 } else { 0.25 };
        let sd = (expected * (1.0 - expected) / draws as f64).sqrt();
        assert!((ones - expected).abs() < 5.0 * sd, "x={x}: {ones}");
    }
}

#[test]
fn shuffle_is_uniform_on_three_elements() {
    let trials = 1_000_000u64;
    let mut perms = std::collections::HashMap::new();
    let mut first_at = [0u64; 3];
    let master = RandomSource::new(99);
    for t in 0..trials {
        let out = shuffle(vec![0u8, 1, 2], &master.child(t));
        first_at[out.iter().position(|&v| v == 0).unwrap()] += 1;
        *perms.entry(out).or_insert(0u64) += 1;
    }
    for c in first_at {
        assert!((c as f64 / trials as f64 - 1.0 / 3.0).abs() <= 0.002);
    }
    assert_eq!(perms.len(), 6);
    let p = 1.0 / 6.0;
    let sd = (trials as f64 * p * (1.0 - p)).sqrt();
    for (perm, c) in perms {
        assert!(
            (c as f64 - trials as f64 * p).abs() < 5.0 * sd,
            "{perm:?}: {c}"
        );
    }
}

#[test]
fn encoder_is_unbiased_with_bounded_variance() {
    let r = 7;
    let mut rng = RandomSource::new(8).rng();
    let draws = 200_000;
    for x in [0.0, 0.01, 0.3, 0.5, 0.77, 1.0] {
        let vals: Vec<f64> = (0..draws)
            .map(|_| {
                encode_real(x, r, &mut rng)
                    .unwrap()
                    .iter()
                    .filter(|&&b| b)
                    .count() as f64
                    / r as f64
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / draws as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (draws as f64 - 1.0);
        let bound = 1.0 / (4.0 * (r * r) as f64);
        assert!(
            (mean - x).abs() < 5.0 * (bound / draws as f64).sqrt() + 1e-12,
            "x={x}: {mean}"
        );
        assert!(var <= bound * 1.05 + 1e-12, "x={x}: {var}");
    }
}

#[test]
fn bitsum_is_unbiased() {
    let (n, ones) = (2000, 700);
    let params = BitSumParams::new(n, 600.0).unwrap();
    let data = BitDataset::with_ones(n, ones).unwrap();
    let records = run_trials(3000, 1, false, |s| {
        Ok(Outcome {
            true_value: ones as f64,
            estimate: params.run(&data, s)?.0,
        })
    })
    .unwrap();
    let s = Summary::of(&records);
    assert!(s.mean_error.abs() < 4.0 * s.mean_error_se, "{s:?}");
}

#[test]
fn realsum_is_unbiased() {
    let n = 500;
    let params = RealSumParams::new(n, 200.0, 5).unwrap();
    let data = datasets::uniform_reals(n, &RandomSource::new(2)).unwrap();
    let records = run_trials(3000, 2, false, |s| {
        Ok(Outcome {
            true_value: data.sum(),
            estimate: params.run(&data, s)?.0,
        })
    })
    .unwrap();
    let s = Summary::of(&records);
    assert!(s.mean_error.abs() < 4.0 * s.mean_error_se, "{s:?}");
}

#[test]
fn local_baseline_is_unbiased() {
    let data = BitDataset::with_ones(1000, 400).unwrap();
    let records = run_trials(3000, 4, false, |s| {
        Ok(Outcome {
            true_value: 400.0,
            estimate: local_baseline_bitsum(&data, 1.0, s)?,
        })
    })
    .unwrap();
    let s = Summary::of(&records);
    assert!(s.mean_error.abs() < 4.0 * s.mean_error_se, "{s:?}");
}

#[test]
fn realsum_rounds_pass_exact_check() {
    // Every round is a bit-sum run; its certified per-round level must pass
    // the exact oracle, and r such rounds must compose within budget.
    let (n, budget) = (500, PrivacyBudget::new(2.0, 1e-2).unwrap());
    let params = realsum_params_max_feasible(n, &budget).unwrap();
    let alloc = realsum_round_budget(&budget, params.rounds()).unwrap();
    let eps_round = epsilon_of_lambda(n, params.lambda(), alloc.delta0).unwrap();
    assert!(eps_round <= alloc.eps0);
    let report = verify_shuffled_dp(
        n,
        params.lambda(),
        &PrivacyBudget::new(eps_round, alloc.delta0).unwrap(),
    )
    .unwrap();
    assert!(
        report.pass && report.delta_measured <= alloc.delta0,
        "{report:?}"
    );
    let total = compose(eps_round, alloc.delta0, params.rounds(), alloc.delta_prime).unwrap();
    assert!(total.within(&budget), "{total:?}");
}

#[test]
fn wrapper_matches_shuffled_run() {
    let params = BitSumParams::new(300, 90.0).unwrap();
    let data = BitDataset::with_ones(300, 120).unwrap();
    let local = shuffled_to_local(BitSumRandomizer(params), BitSumAnalyzer(params)).unwrap();
    for seed in 0..50 {
        let source = RandomSource::new(seed);
        let (shuffled, transcript) = run_protocol(
            &BitSumRandomizer(params),
            &BitSumAnalyzer(params),
            data.bits(),
            &source,
        )
        .unwrap();
        assert_eq!(local.run(data.bits(), &source).unwrap(), shuffled);
        let mut reports = local.reports(data.bits(), &source).unwrap();
        let mut pooled = transcript.messages.clone();
        reports.sort();
        pooled.sort();
        assert_eq!(reports, pooled);
    }
}

#[test]
fn wrapper_rejects_multi_message_randomizers() {
    let params = BitSumParams::new(100, 40.0).unwrap();
    let r = HistogramRandomizer { params, domain: 4 };
    let a = HistogramAnalyzer { params, domain: 4 };
    assert!(shuffled_to_local(r, a).is_err());
}

#[test]
fn histogram_messages_and_estimates() {
    let n = 3000;
    let data = datasets::uniform_categorical(n, 8, &RandomSource::new(6)).unwrap();
    let (v, transcript) =
        histogram_protocol_with_lambda(&data, 500.0, &RandomSource::new(7)).unwrap();
    assert_eq!(transcript.len(), n * 8);
    assert_eq!(v.len(), 8);
    assert!(v.iter().all(|&c| (0.0..=n as f64).contains(&c)));
    assert!(check_histogram(&data, &v));
    assert_eq!(data.counts().iter().sum::<usize>(), n);
}

#[test]
fn planted_dataset_has_its_margin() {
    let src = RandomSource::new(1);
    let d = datasets::planted_matrix(1000, 5, 2, 200, &src).unwrap();
    assert_eq!(d.column_sums(), vec![500, 500, 700, 500, 500]);
}
