//! Closed-form asymptotic expectations under three independence structures.
//!
//! * tensor: letters are grouped by copy, order kept inside each group, and
//!   the per-copy expectations multiply;
//! * free: alternating products of centered letters vanish, everything else
//!   follows by centering and recursing on shorter words;
//! * koopman: every (merged) letter factorizes separately, with no clustering
//!   of letters that share a copy but are not adjacent.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Coefficient;
use crate::state::MomentOracle;
use crate::word::{normalize, Polynomial, Word};

/// Words longer than this are refused by the free evaluator (2^n expansion).
pub const MAX_FREE_LETTERS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Law {
    Tensor,
    Free,
    Koopman,
}

impl Law {
    pub const ALL: [Law; 3] = [Law::Tensor, Law::Free, Law::Koopman];

    pub fn moment<S, O>(&self, word: &Word, state: &O) -> Result<S>
    where
        S: Coefficient,
        O: MomentOracle<S> + ?Sized,
    {
        match self {
            Law::Tensor => tensor_moment(word, state),
            Law::Free => free_moment(word, state),
            Law::Koopman => koopman_moment(word, state),
        }
    }

    /// Linear extension to polynomials.
    pub fn expectation<S, O>(&self, p: &Polynomial<S>, state: &O) -> Result<S>
    where
        S: Coefficient,
        O: MomentOracle<S> + ?Sized,
    {
        match self {
            Law::Free => {
                let mut memo = HashMap::new();
                p.evaluate(|w| free_rec(w, state, &mut memo))
            }
            _ => p.evaluate(|w| self.moment(w, state)),
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Law::Tensor => "tensor",
            Law::Free => "free",
            Law::Koopman => "koopman",
        };
        f.pad(s)
    }
}

impl FromStr for Law {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tensor" => Ok(Law::Tensor),
            "free" => Ok(Law::Free),
            "koopman" => Ok(Law::Koopman),
            other => Err(Error::parse(0, other, "expected tensor, free or koopman")),
        }
    }
}

pub fn tensor_moment<S, O>(word: &Word, state: &O) -> Result<S>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    let mut acc = S::one();
    for copy in word.copies() {
        let grouped: Vec<_> = word
            .letters()
            .iter()
            .filter(|l| l.copy() == copy)
            .flat_map(|l| l.symbols().iter().cloned())
            .collect();
        acc = acc * state.moment(&grouped)?;
    }
    Ok(acc)
}

pub fn koopman_moment<S, O>(word: &Word, state: &O) -> Result<S>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    word.letters()
        .iter()
        .try_fold(S::one(), |acc, l| Ok(acc * state.moment(l.symbols())?))
}

pub fn free_moment<S, O>(word: &Word, state: &O) -> Result<S>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    free_rec(word, state, &mut HashMap::new())
}

/// With m_k = <L_k>, expanding prod (L_k - m_k) over the alternating word
/// gives a centered alternating product, whose expectation vanishes. Hence
///
///   <L_1 ... L_n> = - sum_{S nonempty} prod_{k in S} (-m_k) <prod_{k not in S} L_k>
///
/// where the remaining letters are renormalized (same-copy neighbours merge).
/// Every term on the right is strictly shorter.
fn free_rec<S, O>(word: &Word, state: &O, memo: &mut HashMap<Word, S>) -> Result<S>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    if word.is_empty() {
        return Ok(S::one());
    }
    if let Some(v) = memo.get(word) {
        return Ok(v.clone());
    }
    let letters = word.letters();
    let n = letters.len();
    if n > MAX_FREE_LETTERS {
        return Err(Error::invalid(format!(
            "free evaluation limited to {MAX_FREE_LETTERS} letters, got {n}"
        )));
    }
    let neg_means: Vec<S> = letters
        .iter()
        .map(|l| state.moment(l.symbols()).map(|m| -m))
        .collect::<Result<_>>()?;
    // Subsets containing a centered letter have a zero coefficient; only
    // subsets of the letters with nonzero mean are visited.
    let support = neg_means
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .fold(0u32, |acc, (k, _)| acc | (1 << k));
    let mut acc = S::zero();
    let mut mask = support;
    while mask != 0 {
        let mut coef = S::one();
        for (k, m) in neg_means.iter().enumerate() {
            if mask & (1 << k) != 0 {
                coef = coef * m.clone();
            }
        }
        if !coef.is_zero() {
            let rest = normalize(
                letters
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask & (1 << k) == 0)
                    .map(|(_, l)| l.clone()),
            );
            acc = acc + coef * free_rec(&rest, state, memo)?;
        }
        mask = (mask - 1) & support;
    }
    let value = -acc;
    memo.insert(word.clone(), value.clone());
    Ok(value)
}

/// Free cumulants from moments m_1..m_n, inverting
/// m_n = sum_{s=1}^{n} k_s [z^{n-s}] M(z)^s with M(z) = 1 + sum_j m_j z^j,
/// the first-block decomposition of the sum over non-crossing partitions.
pub fn free_cumulants(moments: &[f64]) -> Result<Vec<f64>> {
    let n = moments.len();
    if n > 16 {
        return Err(Error::invalid(format!("free cumulants limited to order 16, got {n}")));
    }
    // m[0] = 1
    let mut series = vec![1.0; n + 1];
    series[1..].copy_from_slice(moments);
    // powers[s][d] = [z^d] M(z)^s for d <= n
    let mut powers = vec![vec![0.0; n + 1]; n + 1];
    powers[0][0] = 1.0;
    for s in 1..=n {
        for d in 0..=n {
            powers[s][d] = (0..=d).map(|j| powers[s - 1][d - j] * series[j]).sum();
        }
    }
    let mut kappa = vec![0.0; n + 1];
    for order in 1..=n {
        let lower: f64 = (1..order).map(|s| kappa[s] * powers[s][order - s]).sum();
        kappa[order] = series[order] - lower;
    }
    Ok(kappa[1..].to_vec())
}
