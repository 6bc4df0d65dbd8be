//! Moments of N^{-1/2}(X_1 + ... + X_N) under each law, classified as
//! Gaussian, semicircle or other.

use freecorr::fluctuations::{
    classify, fluctuation_moments, sum_moment_exact, FreeShiftModel, LawModel, DEFAULT_CLASSIFY_THRESHOLD,
};
use freecorr::Law;

fn main() -> freecorr::Result<()> {
    let n = 1000;
    for law in Law::ALL {
        let seq = fluctuation_moments(&LawModel::bernoulli(law, 12), n, 8)?;
        let c = classify(&seq, DEFAULT_CLASSIFY_THRESHOLD)?;
        println!("{law:<8} N = {n}: {:?} -> {:?} (distance {:.4})", seq.values, c.label, c.distance);
    }
    println!("free shift, N = 10: m4 = {}", sum_moment_exact(&FreeShiftModel, 10, 4)?);
    Ok(())
}
