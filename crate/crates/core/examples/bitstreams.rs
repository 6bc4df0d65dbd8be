//! Commutation bit streams: constructors, random access and the text form.

use freecorr::BitStream;

fn main() -> freecorr::Result<()> {
    let streams = [
        BitStream::constant(false),
        BitStream::thue_morse(),
        BitStream::periodic(&[false, true, true])?,
        BitStream::bernoulli(0.5, 1)?,
        BitStream::explicit((0..16).map(|k| k % 5 == 0).collect()),
        "periodic:0110".parse()?,
    ];
    // a(t) is defined for lags t >= 1; lag 0 always commutes.
    for s in &streams {
        let bits: String = (1..=16).map(|t| char::from(b'0' + s.bit(t).unwrap())).collect();
        println!("{s:<24} a(1..16) = {bits}  mean {:.4}", s.empirical_mean(16)?);
    }
    assert!(streams[0].bit(0).is_err());
    Ok(())
}
