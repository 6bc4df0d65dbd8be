//! Koopman dynamics of the angle-doubling map x -> 2x mod 1 on trigonometric
//! polynomials, and the finite-rank "quantized" observables |f><g| built on
//! top of it.
//!
//! Composition with the map sends the Fourier mode k to 2k, so evolving a
//! function for t steps just relabels modes k -> k 2^t. Modes are big
//! integers; nothing is ever discretized on a grid.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::cesaro::{self, AveragingSchedule, TimePattern};
use crate::error::{Error, Result};
use crate::laws::Law;
use crate::parse;
use crate::state::MomentOracle;
use crate::word::{center_monomial, ObservableSymbol, Polynomial};

/// f(x) = sum_k c_k exp(2 pi i k x), finitely many nonzero c_k.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierObservable {
    coeffs: BTreeMap<BigInt, Complex64>,
}

impl FourierObservable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new().with_mode(0, c)
    }

    pub fn with_mode(mut self, k: impl Into<BigInt>, c: Complex64) -> Self {
        self.add_mode(k.into(), c);
        self
    }

    pub fn add_mode(&mut self, k: BigInt, c: Complex64) {
        let entry = self.coeffs.entry(k.clone()).or_insert(Complex64::zero());
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn coefficient(&self, k: &BigInt) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn modes(&self) -> impl Iterator<Item = (&BigInt, &Complex64)> {
        self.coeffs.iter()
    }

    /// <1|f> = c_0, the Lebesgue average.
    pub fn mean(&self) -> Complex64 {
        self.coefficient(&BigInt::zero())
    }

    /// <self|other> = sum_k conj(c_k(self)) c_k(other).
    pub fn inner(&self, other: &FourierObservable) -> Complex64 {
        let (small, large, flip) = if self.coeffs.len() <= other.coeffs.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let mut acc = Complex64::zero();
        for (k, a) in &small.coeffs {
            if let Some(b) = large.coeffs.get(k) {
                acc += if flip { b.conj() * a } else { a.conj() * b };
            }
        }
        acc
    }

    /// f o phi^t.
    pub fn evolve(&self, t: u32) -> FourierObservable {
        FourierObservable {
            coeffs: self.coeffs.iter().map(|(k, c)| (k << t as usize, *c)).collect(),
        }
    }

    fn axpy(&mut self, a: Complex64, x: &FourierObservable) {
        if a.is_zero() {
            return;
        }
        for (k, c) in &x.coeffs {
            self.add_mode(k.clone(), a * c);
        }
    }

    fn scaled(&self, a: Complex64) -> FourierObservable {
        let mut out = FourierObservable::new();
        out.axpy(a, self);
        out
    }

    pub fn max_abs_mode(&self) -> BigInt {
        self.coeffs.keys().map(|k| k.abs()).max().unwrap_or_default()
    }

    pub fn min_abs_nonzero_mode(&self) -> Option<BigInt> {
        self.coeffs.keys().filter(|k| !k.is_zero()).map(|k| k.abs()).min()
    }
}

/// Smallest t with 2^t * (min nonzero mode of g) > (max mode of f); from then
/// on <f|g_t> = <f><g> exactly. `0` if g is constant.
pub fn mixing_time(f: &FourierObservable, g: &FourierObservable) -> u32 {
    let Some(gmin) = g.min_abs_nonzero_mode() else {
        return 0;
    };
    let fmax = f.max_abs_mode();
    let mut t = 0;
    while (&gmin << t as usize) <= fmax {
        t += 1;
    }
    t
}

/// |ket><bra|.
#[derive(Clone, Debug, PartialEq)]
pub struct RankOneOperator {
    pub ket: FourierObservable,
    pub bra: FourierObservable,
}

impl RankOneOperator {
    pub fn new(ket: FourierObservable, bra: FourierObservable) -> Self {
        RankOneOperator { ket, bra }
    }

    /// R(f) = |f><f|.
    pub fn projector(f: FourierObservable) -> Self {
        RankOneOperator { bra: f.clone(), ket: f }
    }

    /// <1|f><g|1>.
    pub fn expectation(&self) -> Complex64 {
        self.ket.mean() * self.bra.mean().conj()
    }

    pub fn evolve(&self, t: u32) -> Self {
        RankOneOperator {
            ket: self.ket.evolve(t),
            bra: self.bra.evolve(t),
        }
    }
}

/// lambda 1 + sum_j alpha_j |f_j><g_j|. The identity is not finite rank and is
/// tracked as a separate scalar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FiniteRankOperator {
    pub identity: Complex64,
    pub terms: Vec<(Complex64, RankOneOperator)>,
}

impl FiniteRankOperator {
    pub fn identity(lambda: Complex64) -> Self {
        FiniteRankOperator {
            identity: lambda,
            terms: Vec::new(),
        }
    }

    pub fn rank_one(op: RankOneOperator) -> Self {
        FiniteRankOperator {
            identity: Complex64::zero(),
            terms: vec![(Complex64::new(1.0, 0.0), op)],
        }
    }

    pub fn expectation(&self) -> Complex64 {
        self.terms
            .iter()
            .fold(self.identity, |acc, (a, op)| acc + a * op.expectation())
    }

    /// A - <A> 1.
    pub fn centered(&self) -> Self {
        let mut out = self.clone();
        out.identity -= self.expectation();
        out
    }

    pub fn evolve(&self, t: u32) -> Self {
        FiniteRankOperator {
            identity: self.identity,
            terms: self.terms.iter().map(|(a, op)| (*a, op.evolve(t))).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        FiniteRankOperator {
            identity: self.identity.conj(),
            terms: self
                .terms
                .iter()
                .map(|(a, op)| (a.conj(), RankOneOperator::new(op.bra.clone(), op.ket.clone())))
                .collect(),
        }
    }

    fn max_abs_mode(&self) -> BigInt {
        self.terms
            .iter()
            .flat_map(|(_, op)| [op.ket.max_abs_mode(), op.bra.max_abs_mode()])
            .max()
            .unwrap_or_default()
    }

    /// Reads an observable file: lines `mode k = re,im` give R(f) = |f><f|;
    /// with `ket mode ...` / `bra mode ...` lines the operator is |f><g|.
    pub fn parse_obs(text: &str) -> Result<Self> {
        let mut plain = FourierObservable::new();
        let mut ket = FourierObservable::new();
        let mut bra = FourierObservable::new();
        let (mut saw_plain, mut saw_split) = (false, false);
        let mut offset = 0;
        for line in text.lines() {
            let content = line.split('#').next().unwrap_or("").trim();
            if !content.is_empty() {
                let err = |msg: &str| Error::parse(offset, content, msg);
                let (target, rest) = if let Some(r) = content.strip_prefix("ket ") {
                    saw_split = true;
                    (&mut ket, r.trim())
                } else if let Some(r) = content.strip_prefix("bra ") {
                    saw_split = true;
                    (&mut bra, r.trim())
                } else {
                    saw_plain = true;
                    (&mut plain, content)
                };
                let rest = rest.strip_prefix("mode").ok_or_else(|| err("expected `mode k = re,im`"))?;
                let (k, v) = rest.split_once('=').ok_or_else(|| err("expected `=`"))?;
                let k: BigInt = k.trim().parse().map_err(|_| err("invalid mode index"))?;
                let v = parse::parse_complex(v.trim()).map_err(|_| err("invalid coefficient"))?;
                target.add_mode(k, v);
            }
            offset += line.len() + 1;
        }
        match (saw_plain, saw_split) {
            (true, true) => Err(Error::parse(0, "mode", "mix of plain and ket/bra lines")),
            (_, true) => Ok(Self::rank_one(RankOneOperator::new(ket, bra))),
            _ => Ok(Self::rank_one(RankOneOperator::projector(plain))),
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse_obs(&std::fs::read_to_string(path)?)
    }
}

impl fmt::Display for FourierObservable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|(k, c)| format!("({c})e[{k}]")).collect();
        write!(f, "{}", if parts.is_empty() { "0".to_string() } else { parts.join(" + ") })
    }
}

/// <1| A_1(t_1) A_2(t_2) ... A_n(t_n) |1>.
///
/// Contracts left to right, carrying the running bra <u| as a Fourier vector:
/// <u| (l 1 + sum a |f><g|) = conj(l) u + sum conj(a <u|f>) g (as kets).
pub fn multi_correlation(ops: &[(&FiniteRankOperator, u32)]) -> Complex64 {
    let mut u = FourierObservable::constant(Complex64::new(1.0, 0.0));
    for (op, t) in ops {
        let mut next = u.scaled(op.identity.conj());
        for (a, r) in &op.terms {
            let f = r.ket.evolve(*t);
            let amp = a * u.inner(&f);
            next.axpy(amp.conj(), &r.bra.evolve(*t));
        }
        u = next;
    }
    u.mean().conj()
}

/// Named operators acting as a marginal state: `<A C> = <1|A C|1>`.
#[derive(Clone, Debug, Default)]
pub struct OperatorAlgebra {
    ops: BTreeMap<String, FiniteRankOperator>,
}

impl OperatorAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, op: FiniteRankOperator) {
        self.ops.insert(name.to_string(), op);
    }

    pub fn get(&self, symbol: &ObservableSymbol) -> Result<FiniteRankOperator> {
        let op = self
            .ops
            .get(symbol.name())
            .ok_or_else(|| Error::MissingMoment(symbol.to_string()))?;
        Ok(if symbol.is_adjoint() { op.adjoint() } else { op.clone() })
    }
}

impl MomentOracle<Complex64> for OperatorAlgebra {
    fn moment(&self, monomial: &[ObservableSymbol]) -> Result<Complex64> {
        let ops: Vec<FiniteRankOperator> = monomial
            .iter()
            .filter(|s| !s.is_identity())
            .map(|s| self.get(s))
            .collect::<Result<_>>()?;
        let refs: Vec<_> = ops.iter().map(|o| (o, 0)).collect();
        Ok(multi_correlation(&refs))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticCheck {
    /// Cesàro mean over the full grid, diagonal included.
    pub full_grid: Complex64,
    /// Cesàro mean over grid points whose distinct times are at least
    /// `min_gap` apart.
    pub estimate: Complex64,
    pub prediction: Complex64,
    pub error: f64,
    pub min_gap: u64,
}

/// Separation beyond which every adjacent pair of evolved ket/bra vectors of
/// `ops` decorrelates exactly.
pub fn exact_mixing_gap(ops: &[FiniteRankOperator]) -> u64 {
    let max_mode = ops.iter().map(|o| o.max_abs_mode()).max().unwrap_or_default();
    let mut d = 0u64;
    while (BigInt::from(1) << d as usize) <= max_mode {
        d += 1;
    }
    d
}

/// Compares the time-averaged correlation of the centered operators placed
/// at `copies` (one operator per slot, in order) with the koopman-law value of
/// the same centered word. The law holds for finite-rank operators, so an
/// identity component in `ops` is rejected.
pub fn asymptotic_check(
    copies: &[u32],
    ops: &[FiniteRankOperator],
    schedule: &AveragingSchedule,
) -> Result<AsymptoticCheck> {
    if copies.len() != ops.len() {
        return Err(Error::invalid(format!(
            "pattern has {} slots but {} operators were given",
            copies.len(),
            ops.len()
        )));
    }
    if ops.iter().any(|o| !o.identity.is_zero()) {
        return Err(Error::invalid(
            "operators must be finite rank (no identity component); centering adds the identity",
        ));
    }
    let mut algebra = OperatorAlgebra::new();
    let names: Vec<String> = (0..ops.len()).map(|i| format!("O{i}")).collect();
    for (name, op) in names.iter().zip(ops) {
        algebra.insert(name, op.clone());
    }

    let pattern = TimePattern::from_copies(copies);
    let canonical = pattern.copies();

    let mut word = Polynomial::<Complex64>::identity();
    for (name, &copy) in names.iter().zip(&canonical) {
        let centered = center_monomial(&[ObservableSymbol::new(name.as_str())], &algebra)?;
        word = word.multiply(&centered.at(copy));
    }
    let prediction = Law::Koopman.expectation(&word, &algebra)?;

    let centered: Vec<FiniteRankOperator> = ops.iter().map(|o| o.centered()).collect();
    let evaluator = |times: &[i64]| {
        let chain: Vec<(&FiniteRankOperator, u32)> = centered
            .iter()
            .zip(&canonical)
            .map(|(op, &c)| (op, times[(c - 1) as usize] as u32))
            .collect();
        multi_correlation(&chain)
    };
    let full_grid = cesaro::average(&pattern, evaluator, schedule)?;
    let min_gap = exact_mixing_gap(ops);
    let estimate = if pattern.distinct_count() > 1 {
        cesaro::diagonal_skip_average(&pattern, evaluator, schedule, min_gap)?
    } else {
        full_grid
    };
    Ok(AsymptoticCheck {
        full_grid,
        estimate,
        prediction,
        error: (estimate - prediction).norm(),
        min_gap,
    })
}
