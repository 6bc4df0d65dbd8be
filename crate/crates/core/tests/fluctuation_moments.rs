use freecorr::bitstream::BitStream;
use freecorr::fluctuations::{
    brute_force_raw_sum_moment, classify, gaussian_moments, raw_sum_moment, semicircle_moments, shift_fluctuation_moments,
    sum_moment, sum_moment_exact, FreeShiftModel, LawLabel, LawModel, ShiftModel,
};
use freecorr::Law;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Number of words of length m over n letters that cancel completely when
/// each letter squares to 1 and nothing else simplifies.
///
/// A cancelling word splits uniquely into minimal cancelling blocks `a w a`,
/// where `w` cancels and none of its own top-level blocks starts with `a`.
fn cancelling_words(n: u64, m: usize) -> BigInt {
    let n = BigInt::from(n);
    // avoid[k]: cancelling words of length k whose top-level blocks avoid one fixed letter
    let mut avoid = vec![BigInt::from(0); m + 1];
    // all[k]: cancelling words of length k
    let mut all = vec![BigInt::from(0); m + 1];
    avoid[0] = BigInt::from(1);
    all[0] = BigInt::from(1);
    for len in 1..=m {
        for block in (2..=len).step_by(2) {
            // blocks of this length starting with a given letter
            let blocks = avoid[block - 2].clone();
            let (a, b) = (avoid[len - block].clone(), all[len - block].clone());
            avoid[len] += (&n - 1) * &blocks * a;
            all[len] += &n * &blocks * b;
        }
    }
    all[m].clone()
}

#[test]
fn free_shift_counts_cancelling_words() {
    for n in 1..=12u64 {
        for m in 1..=8u32 {
            let got = raw_sum_moment(&FreeShiftModel, n, m).unwrap();
            assert_eq!(got, BigRational::from_integer(cancelling_words(n, m as usize)), "N = {n}, m = {m}");
        }
    }
}

#[test]
fn free_shift_ten_copies_fourth_moment() {
    assert_eq!(
        sum_moment_exact(&FreeShiftModel, 10, 4).unwrap(),
        BigRational::new(19.into(), 10.into())
    );
}

#[test]
fn combinatorial_matches_brute_force() {
    for law in Law::ALL {
        let model = LawModel::bernoulli(law, 12);
        for n in 1..=6 {
            for m in 1..=6 {
                assert_eq!(
                    raw_sum_moment(&model, n, m).unwrap(),
                    brute_force_raw_sum_moment(&model, n, m).unwrap(),
                    "{law}, N = {n}, m = {m}"
                );
            }
        }
    }
}

#[test]
fn large_n_moments_approach_limits() {
    let free = LawModel::bernoulli(Law::Free, 12);
    let tensor = LawModel::bernoulli(Law::Tensor, 12);
    let semi = semicircle_moments(8, 1.0).unwrap();
    let gauss = gaussian_moments(8, 1.0).unwrap();
    for k in [2, 4, 6, 8] {
        let f = sum_moment(&free, 1000, k as u32).unwrap();
        let t = sum_moment(&tensor, 1000, k as u32).unwrap();
        assert!((f / semi.moment(k) - 1.0).abs() < 0.01, "free m_{k} = {f}");
        assert!((t / gauss.moment(k) - 1.0).abs() < 0.01, "tensor m_{k} = {t}");
    }
}

#[test]
fn free_law_at_ten_thousand_is_semicircle() {
    let free = LawModel::bernoulli(Law::Free, 12);
    let seq = freecorr::fluctuations::fluctuation_moments(&free, 10_000, 6).unwrap();
    let c = classify(&seq, 0.05).unwrap();
    assert_eq!(c.label, LawLabel::Semicircle);
    assert!(c.distance < 1e-3, "{c:?}");
}

#[test]
fn analytic_laws_classify_as_themselves() {
    for var in [0.5, 1.0, 3.0] {
        let g = classify(&gaussian_moments(8, var).unwrap(), 0.05).unwrap();
        assert_eq!((g.label, g.distance), (LawLabel::Gaussian, 0.0));
        let s = classify(&semicircle_moments(8, var).unwrap(), 0.05).unwrap();
        assert_eq!((s.label, s.distance), (LawLabel::Semicircle, 0.0));
        assert!(gaussian_moments(8, var).unwrap().is_hankel_positive(1e-9));
    }
}

#[test]
fn commuting_shift_fluctuations_follow_tensor_count() {
    let v = shift_fluctuation_moments(&BitStream::constant(false), 10, 4, 200, 100_000).unwrap();
    assert!((v - 2.8).abs() < 1e-12, "{v}");
}

#[test]
fn shift_model_on_alternating_pattern() {
    // e1 e2 e1 e2 is 1 for a commuting stream; a stream that anticommutes at
    // every nonzero lag gives -1 off the diagonal and 1 on it.
    use freecorr::fluctuations::PatternModel;
    let commuting = ShiftModel::new(BitStream::constant(false), 100, 1_000_000);
    assert_eq!(commuting.pattern_moment(&[1, 2, 1, 2]).unwrap(), 1.0);
    let anti = ShiftModel::new(BitStream::constant(true), 100, 1_000_000);
    let v = anti.pattern_moment(&[1, 2, 1, 2]).unwrap();
    assert!((v - (2.0 / 101.0 - 1.0)).abs() < 1e-12, "{v}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn odd_moments_of_symmetric_generators_vanish(n in 1u64..200, k in 0u32..3) {
        let m = 2 * k + 1;
        for law in Law::ALL {
            prop_assert_eq!(sum_moment(&LawModel::bernoulli(law, 12), n, m).unwrap(), 0.0);
        }
    }
}
