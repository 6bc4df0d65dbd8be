//! Jordan–Wigner style Pauli representation of the shift generators, used as
//! an independent check of the word reduction.

use freecorr::pauli::{cross_check, represent, trace_expectation};
use freecorr::shift::expectation;
use freecorr::{BitStream, TimedWord};

fn main() -> freecorr::Result<()> {
    let stream = BitStream::periodic(&[false, true, false])?;
    for (t, p) in represent(&[0, 1, 2, 4], &stream)? {
        println!("e_{t} -> {p}");
    }
    let word = TimedWord::new(vec![0, 2, 1, 0, 4, 2, 1, 4]);
    println!(
        "<{word}>: reduction {:+}, Pauli trace {:+}",
        expectation(&word, &stream),
        trace_expectation(&word, &stream)?
    );
    let report = cross_check(2000, 11)?;
    println!("{}/{} random words agree", report.matches(), report.checked);
    Ok(())
}
