//! Time-averaged correlations of finite-rank operators under the doubling map,
//! compared with the koopman law.

use freecorr::cesaro::AveragingSchedule;
use freecorr::koopman::{asymptotic_check, mixing_time, FiniteRankOperator, FourierObservable, RankOneOperator};
use num_complex::Complex64;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn main() -> freecorr::Result<()> {
    let f = FourierObservable::constant(c(0.8, 0.0)).with_mode(1, c(0.3, 0.1)).with_mode(-2, c(0.2, 0.0));
    let g = FourierObservable::constant(c(0.5, 0.5)).with_mode(1, c(1.0, 0.0));
    println!("<f, g∘T^t> = <f><g> for t >= {}", mixing_time(&f, &g));

    let a = FiniteRankOperator::rank_one(RankOneOperator::projector(f.clone()));
    let b = FiniteRankOperator::rank_one(RankOneOperator::new(g.clone(), f.clone()));
    let d = FiniteRankOperator::rank_one(RankOneOperator::projector(
        FourierObservable::constant(c(0.6, 0.0)).with_mode(-2, c(-0.4, 0.0)),
    ));
    let ops = [a, b, d];
    for horizon in [16, 32, 64] {
        let check = asymptotic_check(&[1, 2, 1], &ops, &AveragingSchedule::equal(horizon, 2)?)?;
        println!(
            "T = {horizon:>3}: estimate {:.6}  prediction {:.6}  error {:.1e}  full grid {:.6}",
            check.estimate, check.prediction, check.error, check.full_grid
        );
    }
    Ok(())
}
