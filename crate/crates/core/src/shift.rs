//! Quantum shifts: words of self-adjoint unitaries e(t) with e(t)^2 = 1 and
//! commutation signs e(s+d) e(s) = (-1)^{a(d)} e(s) e(s+d) fixed by a bit
//! stream. The state vanishes on every nontrivial reduced word.

use smallvec::SmallVec;

use crate::bitstream::BitStream;
use crate::error::{Error, Result};
use crate::word::{normalize, Letter, Polynomial, Word};

/// e(t_1) e(t_2) ... e(t_n); the empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TimedWord(pub Vec<i64>);

impl TimedWord {
    pub fn new(times: Vec<i64>) -> Self {
        TimedWord(times)
    }

    pub fn times(&self) -> &[i64] {
        &self.0
    }

    /// Applies one step of the shift dynamics to every time.
    pub fn shifted(&self, by: i64) -> Self {
        TimedWord(self.0.iter().map(|t| t + by).collect())
    }
}

impl std::fmt::Display for TimedWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|t| format!("e({t})")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedReducedWord {
    pub sign: i8,
    /// Strictly increasing.
    pub times: Vec<i64>,
}

type Stack = SmallVec<[i64; 16]>;

/// Insertion-sort reduction: each incoming generator is bubbled left past
/// larger times (picking up a sign per swap) and cancelled against an equal
/// time if it meets one.
fn reduce_into(times: &[i64], stream: &BitStream, stack: &mut Stack) -> i8 {
    let mut sign = 1i8;
    for &t in times {
        let mut pos = stack.len();
        while pos > 0 && stack[pos - 1] > t {
            sign *= stream.sign((stack[pos - 1] - t) as u64);
            pos -= 1;
        }
        if pos > 0 && stack[pos - 1] == t {
            stack.remove(pos - 1);
        } else {
            stack.insert(pos, t);
        }
    }
    sign
}

pub fn reduce(word: &TimedWord, stream: &BitStream) -> SignedReducedWord {
    let mut stack = Stack::new();
    let sign = reduce_into(&word.0, stream, &mut stack);
    SignedReducedWord {
        sign,
        times: stack.into_vec(),
    }
}

/// `<e(t_1) ... e(t_n)>` in {-1, 0, 1}.
pub fn expectation(word: &TimedWord, stream: &BitStream) -> i8 {
    expectation_of(&word.0, stream)
}

/// Allocation-free form of [`expectation`] for sweeps.
#[inline]
pub fn expectation_of(times: &[i64], stream: &BitStream) -> i8 {
    let mut stack = Stack::new();
    let sign = reduce_into(times, stream, &mut stack);
    if stack.is_empty() {
        sign
    } else {
        0
    }
}

/// Free shift: only e^2 = 1 simplifies. Adjacent equal copies cancel
/// iteratively; the word has expectation 1 iff it cancels completely.
pub fn free_shift_expectation(copies: &[u32]) -> u8 {
    let mut stack: SmallVec<[u32; 16]> = SmallVec::new();
    for &c in copies {
        if stack.last() == Some(&c) {
            stack.pop();
        } else {
            stack.push(c);
        }
    }
    stack.is_empty() as u8
}

/// Expectation of a word whose letters are products of the generator `e`,
/// with copy `c` placed at time `time_of(c)`.
pub fn word_expectation<F>(word: &Word, time_of: F, stream: &BitStream) -> Result<i8>
where
    F: Fn(u32) -> i64,
{
    let mut times = Vec::new();
    for letter in word.letters() {
        for sym in letter.symbols() {
            if sym.name() != "e" {
                return Err(Error::invalid(format!(
                    "shift words are built from the generator `e`, found `{sym}`"
                )));
            }
            times.push(time_of(letter.copy()));
        }
    }
    Ok(expectation_of(&times, stream))
}

/// `<[e(t), e(s)]* [e(t), e(s)]>` expanded through polynomial arithmetic.
pub fn commutator_norm_sq(t: i64, s: i64, stream: &BitStream) -> Result<f64> {
    if t == s {
        return Err(Error::EqualTimes(t));
    }
    let et = Polynomial::<f64>::letter(Letter::named("e", 1));
    let es = Polynomial::<f64>::letter(Letter::named("e", 2));
    let comm = et.multiply(&es).sub(&es.multiply(&et));
    let norm = comm.adjoint().multiply(&comm);
    norm.evaluate(|w| {
        word_expectation(w, |c| if c == 1 { t } else { s }, stream).map(f64::from)
    })
}

/// `e_{c_1} e_{c_2} ...` as a word of the asymptotic algebra.
pub fn generator_word(copies: &[u32]) -> Word {
    normalize(copies.iter().map(|&c| Letter::named("e", c)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_cancels() {
        for stream in [BitStream::constant(true), BitStream::thue_morse()] {
            let r = reduce(&TimedWord::new(vec![5, 5]), &stream);
            assert_eq!(r, SignedReducedWord { sign: 1, times: vec![] });
        }
    }

    #[test]
    fn alternating_four_letters() {
        // a(3) = 1 for periodic:001.
        let s: BitStream = "periodic:001".parse().unwrap();
        let r = reduce(&TimedWord::new(vec![2, 5, 2, 5]), &s);
        assert_eq!(r, SignedReducedWord { sign: -1, times: vec![] });
        assert_eq!(expectation(&TimedWord::new(vec![1, 2, 1, 2]), &BitStream::constant(false)), 1);
    }

    #[test]
    fn alternating_eight_letters_always_one() {
        for stream in [BitStream::constant(true), BitStream::constant(false), BitStream::thue_morse()] {
            let w = TimedWord::new([3, 9].repeat(4));
            assert_eq!(reduce(&w, &stream), SignedReducedWord { sign: 1, times: vec![] });
        }
    }

    #[test]
    fn state_values() {
        let s = BitStream::thue_morse();
        assert_eq!(expectation(&TimedWord::new(vec![3]), &s), 0);
        assert_eq!(expectation(&TimedWord::default(), &s), 1);
        let r = reduce(&TimedWord::new(vec![7, 3, 5]), &s);
        assert_eq!(r.times, vec![3, 5, 7]);
    }

    #[test]
    fn free_shift_examples() {
        assert_eq!(free_shift_expectation(&[1, 2, 2, 1]), 1);
        assert_eq!(free_shift_expectation(&[1, 2, 1, 2]), 0);
        assert_eq!(free_shift_expectation(&[1, 1]), 1);
        assert_eq!(free_shift_expectation(&[]), 1);
        assert_eq!(free_shift_expectation(&[3]), 0);
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator_norm_sq(4, 1, &BitStream::constant(false)).unwrap(), 0.0);
        assert_eq!(commutator_norm_sq(4, 1, &BitStream::constant(true)).unwrap(), 4.0);
        assert_eq!(commutator_norm_sq(2, 2, &BitStream::constant(true)), Err(Error::EqualTimes(2)));
        let abelian = BitStream::constant(false);
        for t in 0..25i64 {
            for s in 0..25i64 {
                if t != s && (t - s).abs() <= 20 {
                    assert_eq!(commutator_norm_sq(t, s, &abelian).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn word_expectation_rejects_foreign_symbols() {
        let w = crate::parse::parse_word("e_1 A_2").unwrap();
        assert!(word_expectation(&w, |c| c as i64, &BitStream::constant(false)).is_err());
    }
}
