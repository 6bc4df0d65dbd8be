//! Cesàro averages of e_{t1} e_{t2} e_{t1} e_{t2} over growing horizons.

use freecorr::cesaro::{convergence_report, AveragingSchedule, TimePattern};
use freecorr::shift::expectation_of;
use freecorr::BitStream;

fn main() -> freecorr::Result<()> {
    let pattern = TimePattern::from_copies(&[1, 2, 1, 2]);
    let ladder: Vec<AveragingSchedule> = [10u64, 100, 1000, 3000]
        .into_iter()
        .map(|t| AveragingSchedule::equal(t, 2))
        .collect::<freecorr::Result<_>>()?;

    for stream in [BitStream::bernoulli(0.5, 1)?, BitStream::constant(true), BitStream::thue_morse()] {
        let eval = |t: &[i64]| {
            let times = [t[0], t[1], t[0], t[1]];
            expectation_of(&times, &stream) as f64
        };
        let report = convergence_report(&pattern, eval, &ladder, 0)?;
        println!("{stream}");
        for row in &report.rows {
            println!("  T = {:>5}  estimate {:+.6}  delta {:?}", row.horizons[0], row.estimate, row.delta);
        }
    }
    Ok(())
}
