//! Moments of normalized fluctuation sums S_N = N^{-1/2} sum_j X_j of a
//! centered generator placed in N distinct copies.
//!
//! Expanding <S_N^m> over index tuples, a tuple's value depends only on which
//! positions share a copy, i.e. on a set partition of the m positions. The
//! combinatorial mode sums over partitions with weight N (N-1) ... (N-k+1)
//! for k blocks; brute-force mode walks all N^m tuples.


use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bitstream::BitStream;
use crate::cesaro::{self, AveragingSchedule, TimePattern};
use crate::error::{Error, Result};
use crate::laws::Law;
use crate::partitions::{block_sizes, catalan, double_factorial_odd, for_each_set_partition};
use crate::scalar::{falling_factorial, Coefficient};
use crate::shift;
use crate::state::MarginalState;
use crate::word::{normalize, Letter, ObservableSymbol};

pub const MAX_MOMENT: u32 = 12;
pub const MAX_COMBINATORIAL_N: u64 = 1_000_000;
pub const MAX_BRUTE_FORCE_N: u64 = 50;
pub const MAX_BRUTE_FORCE_TUPLES: u64 = 20_000_000;
pub const MAX_SHIFT_N: u64 = 50;
pub const MAX_SHIFT_MOMENT: u32 = 8;

/// Real part of a moment value.
pub trait ToReal {
    fn to_real(&self) -> f64;
}

impl ToReal for f64 {
    fn to_real(&self) -> f64 {
        *self
    }
}

impl ToReal for Complex64 {
    fn to_real(&self) -> f64 {
        self.re
    }
}

impl ToReal for BigRational {
    fn to_real(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

/// Expectation of the product X_{c_1} ... X_{c_m} as a function of the copy
/// labels alone.
pub trait PatternModel: Sync {
    type Value: Coefficient + ToReal;

    fn pattern_moment(&self, copies: &[u32]) -> Result<Self::Value>;
}

/// A closed-form law with a centered generator.
#[derive(Clone, Debug)]
pub struct LawModel<S> {
    pub law: Law,
    pub generator: ObservableSymbol,
    pub state: MarginalState<S>,
}

impl<S: Coefficient> LawModel<S> {
    pub fn new(law: Law, generator: ObservableSymbol, state: MarginalState<S>) -> Result<Self> {
        use crate::state::MomentOracle;
        let mean = state.moment(std::slice::from_ref(&generator))?;
        if !mean.is_zero() {
            return Err(Error::invalid("fluctuation generator must be centered"));
        }
        Ok(LawModel { law, generator, state })
    }
}

impl LawModel<BigRational> {
    /// The symmetric +-1 generator `e`: <e^k> = 1 for even k, 0 for odd k.
    pub fn bernoulli(law: Law, max_power: u32) -> Self {
        let e = ObservableSymbol::new("e");
        let mut state = MarginalState::new();
        for k in 1..=max_power {
            let v = if k % 2 == 0 { 1 } else { 0 };
            state.insert(vec![e.clone(); k as usize], BigRational::from_i64(v));
        }
        LawModel { law, generator: e, state }
    }
}

impl<S: Coefficient + ToReal> PatternModel for LawModel<S> {
    type Value = S;

    fn pattern_moment(&self, copies: &[u32]) -> Result<S> {
        let word = normalize(copies.iter().map(|&c| Letter::new(c, self.generator.clone())));
        self.law.moment(&word, &self.state)
    }
}

/// The free shift: only e^2 = 1.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeShiftModel;

impl PatternModel for FreeShiftModel {
    type Value = BigRational;

    fn pattern_moment(&self, copies: &[u32]) -> Result<BigRational> {
        Ok(BigRational::from_i64(shift::free_shift_expectation(copies) as i64))
    }
}

/// Bit-stream shift with asymptotic expectations estimated by Cesàro
/// averaging over one time axis per distinct copy.
#[derive(Clone, Debug)]
pub struct ShiftModel {
    pub stream: BitStream,
    /// Requested horizon T per axis.
    pub horizon: u64,
    /// Cap on grid points per pattern; patterns with many distinct times use
    /// the largest T' <= T with (T'+1)^s within the cap.
    pub max_grid_points: u64,
}

impl ShiftModel {
    pub fn new(stream: BitStream, horizon: u64, max_grid_points: u64) -> Self {
        ShiftModel {
            stream,
            horizon,
            max_grid_points,
        }
    }

    pub fn horizon_for(&self, s: usize) -> u64 {
        let mut t = self.horizon;
        while t > 1 && (t + 1).checked_pow(s as u32).is_none_or(|n| n > self.max_grid_points) {
            t -= 1;
        }
        t
    }
}

impl PatternModel for ShiftModel {
    type Value = f64;

    /// A time used an odd number of times can only cancel on the coincidence
    /// set of the grid, a vanishing fraction; those patterns are 0 in the
    /// limit and are not averaged.
    fn pattern_moment(&self, copies: &[u32]) -> Result<f64> {
        let pattern = TimePattern::from_copies(copies);
        let canon = pattern.copies();
        let s = pattern.distinct_count();
        let mut counts = vec![0usize; s];
        for &c in &canon {
            counts[(c - 1) as usize] += 1;
        }
        if counts.iter().any(|n| n % 2 == 1) {
            return Ok(0.0);
        }
        let schedule = AveragingSchedule::equal(self.horizon_for(s), s)?;
        let stream = &self.stream;
        cesaro::average(
            &pattern,
            |times: &[i64]| {
                let mut word = [0i64; MAX_SHIFT_MOMENT as usize];
                for (slot, &c) in word.iter_mut().zip(&canon) {
                    *slot = times[(c - 1) as usize];
                }
                shift::expectation_of(&word[..canon.len()], stream) as f64
            },
            &schedule,
        )
    }
}

fn check_combinatorial(n: u64, m: u32) -> Result<()> {
    if m > MAX_MOMENT || n == 0 || n > MAX_COMBINATORIAL_N {
        return Err(Error::ModeBound {
            mode: "combinatorial",
            detail: format!("need 1 <= N <= {MAX_COMBINATORIAL_N} and m <= {MAX_MOMENT}, got N = {n}, m = {m}"),
        });
    }
    Ok(())
}

/// Restricted growth strings packed 4 bits per position.
fn partitions_packed(m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_set_partition(m, |labels, _| {
        out.push(labels.iter().enumerate().fold(0u64, |acc, (i, &l)| acc | ((l as u64) << (4 * i))));
    });
    out
}

/// <(sum_j X_j)^m> without normalization, over all set partitions.
pub fn raw_sum_moment<M: PatternModel>(model: &M, n: u64, m: u32) -> Result<M::Value> {
    check_combinatorial(n, m)?;
    let m = m as usize;
    let packed = partitions_packed(m);
    let terms: Vec<M::Value> = packed
        .par_iter()
        .map(|&p| {
            let copies: Vec<u32> = (0..m).map(|i| ((p >> (4 * i)) & 0xf) as u32 + 1).collect();
            let blocks = copies.iter().copied().max().unwrap_or(0) as usize;
            let weight = falling_factorial(n, blocks);
            if weight.is_zero() {
                return Ok(M::Value::zero());
            }
            Ok(M::Value::from_bigint(&weight) * model.pattern_moment(&copies)?)
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(M::Value::zero(), |a, b| a + b))
}

/// <S_N^m> with S_N = N^{-1/2} sum_j X_j.
pub fn sum_moment<M: PatternModel>(model: &M, n: u64, m: u32) -> Result<f64> {
    let raw = raw_sum_moment(model, n, m)?.to_real();
    Ok(raw / (n as f64).powf(m as f64 / 2.0))
}

/// Exact `<S_N^m>` for even m.
pub fn sum_moment_exact<M>(model: &M, n: u64, m: u32) -> Result<BigRational>
where
    M: PatternModel<Value = BigRational>,
{
    if m % 2 == 1 {
        return Err(Error::invalid("exact normalized moments need even m (N^{m/2} is irrational otherwise)"));
    }
    let raw = raw_sum_moment(model, n, m)?;
    Ok(raw / BigRational::from_integer(BigInt::from(n).pow(m / 2)))
}

/// Direct enumeration of all N^m copy tuples.
pub fn brute_force_raw_sum_moment<M: PatternModel>(model: &M, n: u64, m: u32) -> Result<M::Value> {
    let tuples = n.checked_pow(m);
    if n == 0 || n > MAX_BRUTE_FORCE_N || m > MAX_MOMENT || tuples.is_none_or(|t| t > MAX_BRUTE_FORCE_TUPLES) {
        return Err(Error::ModeBound {
            mode: "brute-force",
            detail: format!(
                "need N <= {MAX_BRUTE_FORCE_N}, m <= {MAX_MOMENT}, N^m <= {MAX_BRUTE_FORCE_TUPLES}; got N = {n}, m = {m}"
            ),
        });
    }
    let mut acc = M::Value::zero();
    let mut copies = vec![1u32; m as usize];
    for _ in 0..tuples.unwrap() {
        acc = acc + model.pattern_moment(&copies)?;
        for c in copies.iter_mut() {
            *c += 1;
            if (*c as u64) <= n {
                break;
            }
            *c = 1;
        }
    }
    Ok(acc)
}

pub fn brute_force_sum_moment<M: PatternModel>(model: &M, n: u64, m: u32) -> Result<f64> {
    let raw = brute_force_raw_sum_moment(model, n, m)?.to_real();
    Ok(raw / (n as f64).powf(m as f64 / 2.0))
}

/// m-th fluctuation moment of a bit-stream shift.
pub fn shift_fluctuation_moments(stream: &BitStream, n: u64, m: u32, horizon: u64, max_grid_points: u64) -> Result<f64> {
    if n > MAX_SHIFT_N || m > MAX_SHIFT_MOMENT {
        return Err(Error::ModeBound {
            mode: "shift",
            detail: format!("need N <= {MAX_SHIFT_N}, m <= {MAX_SHIFT_MOMENT}; got N = {n}, m = {m}"),
        });
    }
    sum_moment(&ShiftModel::new(stream.clone(), horizon, max_grid_points), n, m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawLabel {
    Gaussian,
    Semicircle,
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence {
    /// m_1, ..., m_K.
    pub values: Vec<f64>,
    pub label: Option<LawLabel>,
}

impl MomentSequence {
    pub fn new(values: Vec<f64>) -> Self {
        MomentSequence { values, label: None }
    }

    /// m_k for k >= 1; m_0 = 1.
    pub fn moment(&self, k: usize) -> f64 {
        if k == 0 {
            1.0
        } else {
            self.values[k - 1]
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Smallest eigenvalue of the Hankel matrix (m_{i+j}) over the available
    /// moments; nonnegative for moment sequences of a probability law.
    pub fn hankel_min_eigenvalue(&self) -> f64 {
        let d = self.values.len() / 2 + 1;
        let h = DMatrix::from_fn(d, d, |i, j| self.moment(i + j));
        h.symmetric_eigenvalues().min()
    }

    pub fn is_hankel_positive(&self, tol: f64) -> bool {
        self.hankel_min_eigenvalue() >= -tol
    }
}

fn analytic(k: usize, variance: f64, even: impl Fn(u32) -> u64, label: LawLabel) -> Result<MomentSequence> {
    if k > 16 {
        return Err(Error::invalid("analytic moment tables go up to order 16"));
    }
    let values = (1..=k)
        .map(|j| {
            if j % 2 == 1 {
                0.0
            } else {
                even(j as u32 / 2) as f64 * variance.powi(j as i32 / 2)
            }
        })
        .collect();
    Ok(MomentSequence {
        values,
        label: Some(label),
    })
}

/// Even moments (2k-1)!! sigma^{2k}.
pub fn gaussian_moments(k: usize, variance: f64) -> Result<MomentSequence> {
    analytic(k, variance, double_factorial_odd, LawLabel::Gaussian)
}

/// Even moments Catalan(k) sigma^{2k}.
pub fn semicircle_moments(k: usize, variance: f64) -> Result<MomentSequence> {
    analytic(k, variance, catalan, LawLabel::Semicircle)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub label: LawLabel,
    pub distance: f64,
    pub gaussian_distance: f64,
    pub semicircle_distance: f64,
}

pub const DEFAULT_CLASSIFY_THRESHOLD: f64 = 0.05;

/// Nearest of the two reference laws by max relative deviation of the
/// unit-variance even moments m_4, m_6, ...
pub fn classify(seq: &MomentSequence, threshold: f64) -> Result<Classification> {
    if seq.len() < 4 {
        return Err(Error::invalid("classification needs at least m_1..m_4"));
    }
    let var = seq.moment(2);
    if var <= 0.0 {
        return Err(Error::invalid(format!("m_2 = {var} is not positive")));
    }
    let distance = |reference: &dyn Fn(u32) -> u64| {
        (2..=seq.len() / 2)
            .map(|k| {
                let scaled = seq.moment(2 * k) / var.powi(k as i32);
                let r = reference(k as u32) as f64;
                (scaled - r).abs() / r
            })
            .fold(0.0, f64::max)
    };
    let g = distance(&double_factorial_odd);
    let s = distance(&catalan);
    let (label, d) = if g <= s { (LawLabel::Gaussian, g) } else { (LawLabel::Semicircle, s) };
    Ok(Classification {
        label: if d < threshold { label } else { LawLabel::Other },
        distance: d,
        gaussian_distance: g,
        semicircle_distance: s,
    })
}

/// m_1..m_K of the fluctuation sum of `model`.
pub fn fluctuation_moments<M: PatternModel>(model: &M, n: u64, k: u32) -> Result<MomentSequence> {
    check_combinatorial(n, k)?;
    Ok(MomentSequence::new(
        (1..=k).map(|m| sum_moment(model, n, m)).collect::<Result<_>>()?,
    ))
}

/// Block-size histogram of a copy pattern, for reporting.
pub fn pattern_block_sizes(copies: &[u32]) -> Vec<usize> {
    let labels: Vec<usize> = TimePattern::from_copies(copies).copies().iter().map(|&c| c as usize - 1).collect();
    let blocks = labels.iter().copied().max().map_or(0, |b| b + 1);
    block_sizes(&labels, blocks)
}
