//! Vacuum expectations of shift-generator words, reduced by sign-tracking
//! reordering, and the commutator identity.

use freecorr::shift::{commutator_norm_sq, expectation, free_shift_expectation, reduce};
use freecorr::{BitStream, TimedWord};

fn main() -> freecorr::Result<()> {
    let word = TimedWord::new(vec![0, 3, 0, 3]);
    for stream in [BitStream::constant(false), BitStream::constant(true), BitStream::thue_morse()] {
        println!("{stream:<14} <{word}> = {:+}", expectation(&word, &stream));
    }

    let tm = BitStream::thue_morse();
    let long = TimedWord::new(vec![5, 1, 2, 5, 1, 7, 2]);
    let r = reduce(&long, &tm);
    println!("reduce {long} -> sign {:+}, times {:?}", r.sign, r.times);

    for (t, s) in [(0, 1), (0, 3), (2, 9)] {
        println!("||[e_{t}, e_{s}]||^2 = {}", commutator_norm_sq(t, s, &tm)?);
    }

    // Free shift: e_i^2 = 1 is the only relation.
    println!("free shift 1 2 2 1 -> {}", free_shift_expectation(&[1, 2, 2, 1]));
    println!("free shift 1 2 1 2 -> {}", free_shift_expectation(&[1, 2, 1, 2]));
    Ok(())
}
