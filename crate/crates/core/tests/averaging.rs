use freecorr::cesaro::{average, diagonal_skip_average, AveragingSchedule, TimePattern};
use proptest::prelude::*;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Pseudo-random +-1 value of a grid point.
fn noise(times: &[i64], salt: u64) -> f64 {
    let h = times.iter().fold(salt, |h, &t| mix(h ^ (t as u64).wrapping_mul(0x9e3779b97f4a7c15)));
    if h & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn single(t: i64, k: u64) -> f64 {
    ((t as u64 * k) % 7) as f64 - 3.0
}

fn grid_bound(min_gap: u64, s: usize, horizon: u64) -> f64 {
    min_gap as f64 * (s * s) as f64 / horizon as f64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn factorizable_evaluators_average_to_products(t1 in 1u64..200, t2 in 1u64..200, k1 in 1u64..50, k2 in 1u64..50) {
        let p = TimePattern::from_copies(&[1, 2]);
        let sched = AveragingSchedule::new(vec![t1, t2]).unwrap();
        let joint: f64 = average(&p, |t: &[i64]| single(t[0], k1) * single(t[1], k2), &sched).unwrap();
        let a: f64 = average(&TimePattern::from_copies(&[1]), |t: &[i64]| single(t[0], k1), &AveragingSchedule::new(vec![t1]).unwrap()).unwrap();
        let b: f64 = average(&TimePattern::from_copies(&[1]), |t: &[i64]| single(t[0], k2), &AveragingSchedule::new(vec![t2]).unwrap()).unwrap();
        prop_assert!((joint - a * b).abs() < 1e-9, "{} vs {}", joint, a * b);
    }

    #[test]
    fn averaging_is_linear(horizon in 1u64..300, salt in any::<u64>()) {
        // Dyadic weights and integer-valued evaluators keep sums exact.
        let p = TimePattern::from_copies(&[1, 2, 1]);
        let sched = AveragingSchedule::equal(horizon.min(60), 2).unwrap();
        let f = |t: &[i64]| noise(t, salt);
        let g = |t: &[i64]| (t[0] - t[1]) as f64;
        let lhs: f64 = average(&p, |t: &[i64]| 0.5 * f(t) + 2.0 * g(t), &sched).unwrap();
        let rhs = 0.5 * average::<_, f64, _>(&p, f, &sched).unwrap() + 2.0 * average::<_, f64, _>(&p, g, &sched).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()), "{} vs {}", lhs, rhs);
    }

    #[test]
    fn skipping_the_diagonal_costs_order_gap_over_t(horizon in 20u64..400, gap in 1u64..6, salt in any::<u64>()) {
        let p = TimePattern::from_copies(&[1, 2, 3]);
        let h = horizon.min(80);
        let sched = AveragingSchedule::equal(h, 3).unwrap();
        let f = |t: &[i64]| noise(t, salt);
        let full: f64 = average(&p, f, &sched).unwrap();
        let skip: f64 = diagonal_skip_average(&p, f, &sched, gap).unwrap();
        prop_assert!((full - skip).abs() <= grid_bound(gap, 3, h));
    }
}

/// Worst case for two times: +1 on the band the skip removes, -1 off it.
#[test]
fn diagonal_bound_holds_for_adversarial_two_time_evaluator() {
    let p = TimePattern::from_copies(&[1, 2]);
    for horizon in [10u64, 50, 200, 1000] {
        for gap in [1u64, 2, 5, 9] {
            let sched = AveragingSchedule::equal(horizon, 2).unwrap();
            let f = |t: &[i64]| if t[0].abs_diff(t[1]) < gap { 1.0 } else { -1.0 };
            let full: f64 = average(&p, f, &sched).unwrap();
            let skip: f64 = diagonal_skip_average(&p, f, &sched, gap).unwrap();
            let diff = (full - skip).abs();
            assert!(diff <= grid_bound(gap, 2, horizon), "T = {horizon}, gap = {gap}: {diff}");
        }
    }
}
