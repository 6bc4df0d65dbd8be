//! Pauli-string representation of the bit-stream algebra.
//!
//! Generalized Jordan-Wigner: with distinct times t_1 < ... < t_n,
//! e(t_k) = (prod_{j<k, a(t_k - t_j) = 1} Z_j) X_k. The normalized trace kills
//! every non-identity string, which is exactly the shift state. Nothing here
//! shares code with [`crate::shift`]; it exists to check it.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitstream::BitStream;
use crate::error::{Error, Result};
use crate::shift::TimedWord;

pub const MAX_SLOTS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// Single-slot product `self * other` as (power of i, letter).
    fn mul(self, other: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (X, X) | (Y, Y) | (Z, Z) => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
        }
    }
}

/// `i^phase * P_1 ⊗ ... ⊗ P_n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString {
            phase: 0,
            letters: vec![Pauli::I; n],
        }
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity_letters(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    pub fn mul(&self, other: &PauliString) -> PauliString {
        assert_eq!(self.letters.len(), other.letters.len());
        let mut phase = (self.phase + other.phase) % 4;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(&a, &b)| {
                let (p, l) = a.mul(b);
                phase = (phase + p) % 4;
                l
            })
            .collect();
        PauliString { phase, letters }
    }

    /// Normalized trace: i^phase on the identity string, zero otherwise.
    /// Returned as (re, im) integers.
    pub fn normalized_trace(&self) -> (i8, i8) {
        if !self.is_identity_letters() {
            return (0, 0);
        }
        match self.phase {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{sign}")?;
        for l in &self.letters {
            write!(f, "{l:?}")?;
        }
        Ok(())
    }
}

/// Images of e(t) for strictly sorted distinct `times`.
pub fn represent(times: &[i64], stream: &BitStream) -> Result<BTreeMap<i64, PauliString>> {
    let n = times.len();
    if n > MAX_SLOTS {
        return Err(Error::TooManyTimes(n, MAX_SLOTS));
    }
    let mut sorted = times.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateTime(w[0]));
        }
    }
    let mut out = BTreeMap::new();
    for (k, &tk) in sorted.iter().enumerate() {
        let mut s = PauliString::identity(n);
        for (j, &tj) in sorted[..k].iter().enumerate() {
            if stream.bit(tk - tj)? == 1 {
                s.letters[j] = Pauli::Z;
            }
        }
        s.letters[k] = Pauli::X;
        out.insert(tk, s);
    }
    Ok(out)
}

/// Tracial expectation of the product of images, in word order.
pub fn trace_expectation(word: &TimedWord, stream: &BitStream) -> Result<i8> {
    let mut distinct: Vec<i64> = word.times().to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let images = represent(&distinct, stream)?;
    let product = word
        .times()
        .iter()
        .fold(PauliString::identity(distinct.len()), |acc, t| acc.mul(&images[t]));
    let (re, im) = product.normalized_trace();
    assert_eq!(im, 0, "self-adjoint generators produced an imaginary trace");
    Ok(re)
}

/// Outcome of [`cross_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct CrossCheck {
    pub checked: usize,
    pub mismatches: Vec<(TimedWord, BitStream, i8, i8)>,
}

impl CrossCheck {
    pub fn matches(&self) -> usize {
        self.checked - self.mismatches.len()
    }
}

/// A pool of streams of every kind, drawn from `rng`.
pub fn random_streams(rng: &mut impl Rng, count: usize) -> Vec<BitStream> {
    (0..count)
        .map(|i| match i % 5 {
            0 => BitStream::constant(rng.gen()),
            1 => {
                let len = rng.gen_range(1..=8);
                let pattern: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
                BitStream::periodic(&pattern).expect("nonempty pattern")
            }
            2 => BitStream::thue_morse(),
            _ => BitStream::bernoulli(rng.gen_range(0.0..=1.0), rng.gen()).expect("p in [0, 1]"),
        })
        .collect()
}

/// Random word of at most `max_letters` letters over at most `max_times`
/// distinct times.
pub fn random_word(rng: &mut impl Rng, max_letters: usize, max_times: usize) -> TimedWord {
    let k = rng.gen_range(1..=max_times);
    let offset = rng.gen_range(-50i64..50);
    let mut pool: Vec<i64> = Vec::with_capacity(k);
    while pool.len() < k {
        let t = offset + rng.gen_range(0..64);
        if !pool.contains(&t) {
            pool.push(t);
        }
    }
    let n = rng.gen_range(0..=max_letters);
    TimedWord((0..n).map(|_| pool[rng.gen_range(0..k)]).collect())
}

/// Compares sign-tracking reduction with the Pauli-string trace on `words`
/// random words (at most 12 letters, 8 distinct times) over 50 streams.
pub fn cross_check(words: usize, seed: u64) -> Result<CrossCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let streams = random_streams(&mut rng, 50);
    let mut mismatches = Vec::new();
    for i in 0..words {
        let stream = &streams[i % streams.len()];
        let word = random_word(&mut rng, 12, 8);
        let fast = crate::shift::expectation(&word, stream);
        let slow = trace_expectation(&word, stream)?;
        if fast != slow {
            mismatches.push((word, stream.clone(), fast, slow));
        }
    }
    Ok(CrossCheck {
        checked: words,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Pauli::*;

    fn ps(letters: &[Pauli]) -> PauliString {
        PauliString {
            phase: 0,
            letters: letters.to_vec(),
        }
    }

    #[test]
    fn single_time_is_x() {
        let r = represent(&[4], &BitStream::constant(true)).unwrap();
        assert_eq!(r[&4], ps(&[X]));
    }

    #[test]
    fn anticommuting_pair() {
        let r = represent(&[1, 3], &BitStream::constant(true)).unwrap();
        assert_eq!(r[&3], ps(&[Z, X]));
        let ab = r[&1].mul(&r[&3]);
        let ba = r[&3].mul(&r[&1]);
        assert_eq!(ab.letters, ba.letters);
        assert_eq!((ab.phase + 2) % 4, ba.phase);
    }

    #[test]
    fn commuting_pair() {
        let r = represent(&[1, 3], &BitStream::constant(false)).unwrap();
        assert_eq!(r[&3], ps(&[I, X]));
        assert_eq!(r[&1].mul(&r[&3]), r[&3].mul(&r[&1]));
    }

    #[test]
    fn images_are_involutions() {
        let r = represent(&[0, 2, 3, 7, 11], &BitStream::thue_morse()).unwrap();
        for img in r.values() {
            assert_eq!(img.mul(img), PauliString::identity(5));
        }
    }

    #[test]
    fn duplicate_and_oversized_requests() {
        assert_eq!(represent(&[2, 2], &BitStream::thue_morse()), Err(Error::DuplicateTime(2)));
        let many: Vec<i64> = (0..17).collect();
        assert!(matches!(represent(&many, &BitStream::thue_morse()), Err(Error::TooManyTimes(17, 16))));
    }

    #[test]
    fn trace_values() {
        let s = BitStream::constant(true);
        assert_eq!(trace_expectation(&TimedWord::default(), &s).unwrap(), 1);
        assert_eq!(trace_expectation(&TimedWord::new(vec![1, 2, 1, 2]), &s).unwrap(), -1);
        assert_eq!(trace_expectation(&TimedWord::new(vec![1, 2, 1]), &s).unwrap(), 0);
    }

    #[test]
    fn pauli_multiplication_table() {
        // XY = iZ, YX = -iZ
        let xy = ps(&[X]).mul(&ps(&[Y]));
        assert_eq!((xy.phase, xy.letters.clone()), (1, vec![Z]));
        let yx = ps(&[Y]).mul(&ps(&[X]));
        assert_eq!((yx.phase, yx.letters.clone()), (3, vec![Z]));
        // XYZ = i * 1
        let xyz = xy.mul(&ps(&[Z]));
        assert_eq!(xyz.normalized_trace(), (0, 1));
    }
}
