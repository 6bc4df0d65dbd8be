//! Multi-time Cesàro averages of correlation functions.
//!
//! A [`TimePattern`] says which slots of a product share a time; the
//! averaging engine sums an evaluator over the grid of one time per distinct
//! copy. Slots with the same copy index always receive the same time.
//!
//! The grid is cut into fixed chunks of consecutive linear indices (t_1
//! fastest); chunk sums are combined in index order, so results are
//! bit-identical whatever the number of worker threads.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{ObservableSymbol, Word};

const CHUNK: u64 = 1 << 15;

/// Values an evaluator may return.
pub trait GridValue: Copy + Send + Sync {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    /// Division by a point count; exact when every summand was equal.
    fn divide(self, count: f64) -> Self;
    fn magnitude(self) -> f64;
}

impl GridValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn divide(self, count: f64) -> Self {
        self / count
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl GridValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn divide(self, count: f64) -> Self {
        self / count
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimePattern<P> {
    slots: Vec<(u32, P)>,
    distinct: usize,
}

impl<P> TimePattern<P> {
    /// Copy indices are relabeled to 1..=s by first appearance.
    pub fn new(slots: Vec<(u32, P)>) -> Self {
        let mut seen: Vec<u32> = Vec::new();
        let slots: Vec<(u32, P)> = slots
            .into_iter()
            .map(|(c, p)| {
                let idx = match seen.iter().position(|&x| x == c) {
                    Some(i) => i,
                    None => {
                        seen.push(c);
                        seen.len() - 1
                    }
                };
                (idx as u32 + 1, p)
            })
            .collect();
        TimePattern {
            slots,
            distinct: seen.len(),
        }
    }

    pub fn slots(&self) -> &[(u32, P)] {
        &self.slots
    }

    pub fn copies(&self) -> Vec<u32> {
        self.slots.iter().map(|(c, _)| *c).collect()
    }

    /// Number of distinct times s.
    pub fn distinct_count(&self) -> usize {
        self.distinct
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }
}

impl TimePattern<()> {
    pub fn from_copies(copies: &[u32]) -> Self {
        Self::new(copies.iter().map(|&c| (c, ())).collect())
    }
}

impl TimePattern<ObservableSymbol> {
    /// One slot per symbol; merged letters contribute several slots at the
    /// same copy.
    pub fn from_word(word: &Word) -> Self {
        Self::new(
            word.letters()
                .iter()
                .flat_map(|l| l.symbols().iter().map(move |s| (l.copy(), s.clone())))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AveragingSchedule {
    horizons: Vec<u64>,
}

impl AveragingSchedule {
    pub fn new(horizons: Vec<u64>) -> Result<Self> {
        if horizons.contains(&0) {
            return Err(Error::invalid("all horizons must be >= 1"));
        }
        Ok(AveragingSchedule { horizons })
    }

    /// Same horizon T on all s axes.
    pub fn equal(horizon: u64, s: usize) -> Result<Self> {
        Self::new(vec![horizon; s])
    }

    /// T_1 = base, T_{k+1} = T_k^2: a numerical proxy for taking the inner
    /// limit first.
    pub fn staircase(base: u64, s: usize) -> Result<Self> {
        let mut horizons = Vec::with_capacity(s);
        let mut t = base;
        for k in 0..s {
            if k > 0 {
                t = t
                    .checked_mul(t)
                    .ok_or_else(|| Error::invalid("staircase horizons overflow"))?;
            }
            horizons.push(t);
        }
        Self::new(horizons)
    }

    pub fn horizons(&self) -> &[u64] {
        &self.horizons
    }

    fn grid_size(&self) -> Result<u64> {
        self.horizons
            .iter()
            .try_fold(1u64, |acc, &t| acc.checked_mul(t + 1))
            .ok_or_else(|| Error::invalid("grid too large"))
    }
}

fn grid_sum<V, F>(s: usize, schedule: &AveragingSchedule, evaluator: &F, min_gap: u64) -> Result<(V, u64)>
where
    V: GridValue,
    F: Fn(&[i64]) -> V + Sync,
{
    if schedule.horizons.len() != s {
        return Err(Error::invalid(format!(
            "schedule has {} horizons but the pattern has {s} distinct times",
            schedule.horizons.len()
        )));
    }
    let total = schedule.grid_size()?;
    let extents: Vec<u64> = schedule.horizons.iter().map(|t| t + 1).collect();
    let n_chunks = total.div_ceil(CHUNK);
    let partials: Vec<(V, u64)> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * CHUNK;
            let end = (start + CHUNK).min(total);
            let mut times = vec![0i64; s];
            let mut rem = start;
            for (t, &e) in times.iter_mut().zip(&extents) {
                *t = (rem % e) as i64;
                rem /= e;
            }
            let mut sum = V::zero();
            let mut count = 0u64;
            for _ in start..end {
                if min_gap == 0 || separated(&times, min_gap) {
                    sum = sum.add(evaluator(&times));
                    count += 1;
                }
                for (t, &e) in times.iter_mut().zip(&extents) {
                    *t += 1;
                    if (*t as u64) < e {
                        break;
                    }
                    *t = 0;
                }
            }
            (sum, count)
        })
        .collect();
    Ok(partials
        .into_iter()
        .fold((V::zero(), 0), |(a, n), (b, m)| (a.add(b), n + m)))
}

fn separated(times: &[i64], min_gap: u64) -> bool {
    for i in 0..times.len() {
        for j in i + 1..times.len() {
            if times[i].abs_diff(times[j]) < min_gap {
                return false;
            }
        }
    }
    true
}

/// Mean of `evaluator` over t_c in 0..=T_c for every distinct copy c. The
/// evaluator receives the times indexed by (canonical copy - 1).
pub fn average<P, V, F>(pattern: &TimePattern<P>, evaluator: F, schedule: &AveragingSchedule) -> Result<V>
where
    V: GridValue,
    F: Fn(&[i64]) -> V + Sync,
{
    let (sum, count) = grid_sum(pattern.distinct_count(), schedule, &evaluator, 0)?;
    Ok(sum.divide(count as f64))
}

/// Like [`average`], but drops grid points where two distinct copies sit
/// closer than `min_gap`, normalizing by the number of points kept.
pub fn diagonal_skip_average<P, V, F>(
    pattern: &TimePattern<P>,
    evaluator: F,
    schedule: &AveragingSchedule,
    min_gap: u64,
) -> Result<V>
where
    V: GridValue,
    F: Fn(&[i64]) -> V + Sync,
{
    let (sum, count) = grid_sum(pattern.distinct_count(), schedule, &evaluator, min_gap)?;
    if count == 0 {
        return Err(Error::EmptyGrid(min_gap));
    }
    Ok(sum.divide(count as f64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow<V> {
    pub horizons: Vec<u64>,
    pub estimate: V,
    /// Distance to the previous rung; `None` on the first.
    pub delta: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceReport<V> {
    pub rows: Vec<ConvergenceRow<V>>,
    /// Set when some delta grew relative to the previous one.
    pub non_cauchy: bool,
}

pub fn convergence_report<P, V, F>(
    pattern: &TimePattern<P>,
    evaluator: F,
    ladder: &[AveragingSchedule],
    min_gap: u64,
) -> Result<ConvergenceReport<V>>
where
    V: GridValue + std::ops::Sub<Output = V>,
    F: Fn(&[i64]) -> V + Sync,
{
    if ladder.is_empty() {
        return Err(Error::invalid("convergence ladder must be nonempty"));
    }
    let mut rows: Vec<ConvergenceRow<V>> = Vec::with_capacity(ladder.len());
    let mut non_cauchy = false;
    for schedule in ladder {
        let estimate = if min_gap == 0 {
            average(pattern, &evaluator, schedule)?
        } else {
            diagonal_skip_average(pattern, &evaluator, schedule, min_gap)?
        };
        let delta = rows.last().map(|prev| (estimate - prev.estimate).magnitude());
        if let (Some(d), Some(Some(prev))) = (delta, rows.last().map(|r| r.delta)) {
            if d > prev {
                non_cauchy = true;
            }
        }
        rows.push(ConvergenceRow {
            horizons: schedule.horizons.clone(),
            estimate,
            delta,
        });
    }
    Ok(ConvergenceReport { rows, non_cauchy })
}

/// Runs `f` inside a dedicated pool with `threads` workers.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .expect("thread pool")
        .install(f)
}
