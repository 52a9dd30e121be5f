//! Property suites for the parameter calculus, composition and shuffler.

use proptest::prelude::*;
use shuffled_dp::bitsum::{epsilon_of_lambda, lambda_floor, lambda_star};
use shuffled_dp::realsum::encode_real;
use shuffled_dp::{compose, per_round_budget, shuffle, PrivacyBudget, RandomSource};

#[test]
fn composition_is_monotone() {
    let eps_grid = [0.001, 0.01, 0.05, 0.1, 0.3];
    let rounds_grid = [1usize, 2, 5, 10, 50, 100];
    for (i, &e) in eps_grid.iter().enumerate() {
        for (j, &t) in rounds_grid.iter().enumerate() {
            let here = compose(e, 1e-8, t, 1e-6).unwrap();
            if i + 1 < eps_grid.len() {
                assert!(compose(eps_grid[i + 1], 1e-8, t, 1e-6).unwrap().eps > here.eps);
            }
            if j + 1 < rounds_grid.len() {
                let more = compose(e, 1e-8, rounds_grid[j + 1], 1e-6).unwrap();
                assert!(more.eps > here.eps && more.delta > here.delta);
            }
            assert!(compose(e, 1e-8, t, 1e-7).unwrap().eps > here.eps);
        }
    }
}

#[test]
fn per_round_split_fits_target() {
    for eps in [0.1, 0.5, 1.0, 2.0] {
        for delta in [1e-9, 1e-6, 1e-3] {
            for t in [1usize, 3, 16, 100, 1000] {
                let target = PrivacyBudget::new(eps, delta).unwrap();
                let split = per_round_budget(&target, t).unwrap();
                let got = split.composed(t).unwrap();
                assert!(got.within(&target), "{target:?} x{t}: {got:?}");
                assert!(got.eps > eps * (1.0 - 1e-6));
            }
        }
    }
}

proptest! {
    #[test]
    fn certified_level_decreases(n in 300usize..100_000, a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let delta = 1e-6;
        let floor = lambda_floor(delta);
        prop_assume!(n as f64 > floor);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        prop_assume!(hi - lo > 1e-9);
        let l1 = floor + lo * (n as f64 - floor);
        let l2 = floor + hi * (n as f64 - floor);
        prop_assert!(epsilon_of_lambda(n, l2, delta).unwrap() < epsilon_of_lambda(n, l1, delta).unwrap());
    }

    #[test]
    fn lambda_star_certifies(n in 300usize..200_000, eps in 0.05f64..2.0) {
        let budget = PrivacyBudget::new(eps, 1e-6).unwrap();
        if let Ok(l) = lambda_star(n, &budget) {
            prop_assert!(epsilon_of_lambda(n, l, 1e-6).unwrap() <= eps);
            prop_assert!(l <= n as f64);
        }
    }

    #[test]
    fn shuffle_preserves_multiset(v in prop::collection::vec(0u16..50, 0..200), seed: u64) {
        let src = RandomSource::new(seed);
        let out = shuffle(v.clone(), &src);
        prop_assert_eq!(&out, &shuffle(v.clone(), &src));
        let (mut a, mut b) = (v, out);
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn encoder_mean_structure(x in 0.0f64..=1.0, r in 1usize..64, seed: u64) {
        let bits = encode_real(x, r, &mut RandomSource::new(seed).rng()).unwrap();
        let ones = bits.iter().filter(|&&b| b).count() as f64;
        prop_assert_eq!(bits.len(), r);
        prop_assert!((ones - x * r as f64).abs() < 1.0 + 1e-9);
    }
}
