use freecorr::bitstream::BitStream;
use freecorr::pauli::{self, represent, trace_expectation, Pauli};
use freecorr::shift::{self, reduce, SignedReducedWord};
use freecorr::TimedWord;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn stream() -> impl Strategy<Value = BitStream> {
    prop_oneof![
        any::<bool>().prop_map(BitStream::constant),
        Just(BitStream::thue_morse()),
        prop::collection::vec(any::<bool>(), 1..8).prop_map(|p| BitStream::periodic(&p).unwrap()),
        (0.0f64..=1.0, any::<u64>()).prop_map(|(p, s)| BitStream::bernoulli(p, s).unwrap()),
    ]
}

fn timed_word() -> impl Strategy<Value = TimedWord> {
    (prop::collection::vec(-30i64..30, 1..=8), prop::collection::vec(any::<prop::sample::Index>(), 0..=12))
        .prop_map(|(pool, picks)| TimedWord(picks.iter().map(|i| pool[i.index(pool.len())]).collect()))
}

/// Reduction by applying the two rewriting rules at random positions until
/// the word is strictly increasing.
fn random_order_reduce(word: &TimedWord, stream: &BitStream, rng: &mut impl Rng) -> SignedReducedWord {
    let mut times = word.0.clone();
    let mut sign = 1i8;
    loop {
        let moves: Vec<usize> = (0..times.len().saturating_sub(1))
            .filter(|&i| times[i] >= times[i + 1])
            .collect();
        if moves.is_empty() {
            return SignedReducedWord { sign, times };
        }
        let i = moves[rng.gen_range(0..moves.len())];
        if times[i] == times[i + 1] {
            times.drain(i..i + 2);
        } else {
            if stream.bit(times[i] - times[i + 1]).unwrap() == 1 {
                sign = -sign;
            }
            times.swap(i, i + 1);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn reduction_matches_pauli_trace(w in timed_word(), s in stream()) {
        prop_assert_eq!(shift::expectation(&w, &s), trace_expectation(&w, &s).unwrap());
    }

    #[test]
    fn shift_covariance(w in timed_word(), s in stream(), by in -100i64..100) {
        prop_assert_eq!(shift::expectation(&w, &s), shift::expectation(&w.shifted(by), &s));
        prop_assert_eq!(reduce(&w, &s).sign, reduce(&w.shifted(by), &s).sign);
    }
}

#[test]
fn reduction_is_confluent() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let streams = pauli::random_streams(&mut rng, 50);
    for i in 0..1000 {
        let stream = &streams[i % streams.len()];
        let word = pauli::random_word(&mut rng, 12, 8);
        let expected = reduce(&word, stream);
        for _ in 0..3 {
            assert_eq!(random_order_reduce(&word, stream, &mut rng), expected, "{word} on {stream}");
        }
    }
}

#[test]
fn images_have_shift_commutation_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for stream in pauli::random_streams(&mut rng, 20) {
        let times: Vec<i64> = (0..10).map(|k| 3 * k - 7).collect();
        let images = represent(&times, &stream).unwrap();
        for &t in &times {
            let sq = images[&t].mul(&images[&t]);
            assert_eq!(sq.phase(), 0);
            assert!(sq.letters().iter().all(|&p| p == Pauli::I));
            for &s in &times {
                if s == t {
                    continue;
                }
                let ts = images[&t].mul(&images[&s]);
                let st = images[&s].mul(&images[&t]);
                let anti = stream.bit((t - s).abs()).unwrap() == 1;
                assert_eq!(ts.letters(), st.letters());
                let flip = if anti { 2 } else { 0 };
                assert_eq!(ts.phase(), (st.phase() + flip) % 4, "t = {t}, s = {s}, {stream}");
            }
        }
    }
}

#[test]
fn bernoulli_random_access_is_order_independent() {
    let s = BitStream::bernoulli(0.37, 99).unwrap();
    let forward: Vec<u8> = (1..=5000).map(|t| s.bit(t).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..5000 {
        let t = rng.gen_range(1..=5000i64);
        assert_eq!(s.bit(t).unwrap(), forward[(t - 1) as usize]);
    }
    let backward: Vec<u8> = (1..=5000).rev().map(|t| s.bit(t).unwrap()).collect();
    assert!(backward.iter().rev().eq(forward.iter()));
}
