//! Marginal states: expectations of single-copy monomials.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::parse;
use crate::scalar::Coefficient;
use crate::symbolic::Expr;
use crate::word::{monomial_adjoint, monomial_to_string, ObservableSymbol};

/// Anything that can assign `<M>` to an ordered single-copy monomial.
pub trait MomentOracle<S> {
    fn moment(&self, monomial: &[ObservableSymbol]) -> Result<S>;
}

/// Tabulated moments. `<1> = 1` always; identity symbols inside a monomial
/// are ignored on lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalState<S> {
    table: BTreeMap<Vec<ObservableSymbol>, S>,
}

impl<S: Coefficient> Default for MarginalState<S> {
    fn default() -> Self {
        MarginalState { table: BTreeMap::new() }
    }
}

impl<S: Coefficient> MarginalState<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, monomial: Vec<ObservableSymbol>, value: S) {
        let key: Vec<_> = monomial.into_iter().filter(|s| !s.is_identity()).collect();
        self.table.insert(key, value);
    }

    /// Builder form of [`insert`](Self::insert) taking a monomial such as `A C*`.
    pub fn with(mut self, monomial: &str, value: S) -> Self {
        let monomial = crate::parse::parse_monomial(monomial).unwrap_or_else(|e| panic!("bad monomial `{monomial}`: {e}"));
        self.insert(monomial, value);
        self
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<ObservableSymbol>, &S)> {
        self.table.iter()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }
}

impl<S: Coefficient> MomentOracle<S> for MarginalState<S> {
    fn moment(&self, monomial: &[ObservableSymbol]) -> Result<S> {
        let key: Vec<_> = monomial.iter().filter(|s| !s.is_identity()).cloned().collect();
        if key.is_empty() {
            return Ok(S::one());
        }
        self.table
            .get(&key)
            .cloned()
            .ok_or_else(|| Error::MissingMoment(monomial_to_string(&key)))
    }
}

impl MarginalState<Complex64> {
    /// Spot-checks `<M* M> >= 0` for every tabulated `M` whose `M* M` is also
    /// tabulated. Returns the offending monomials.
    pub fn positivity_violations(&self, tol: f64) -> Vec<String> {
        let mut bad = Vec::new();
        for m in self.table.keys() {
            let mut mm = monomial_adjoint(m);
            mm.extend(m.iter().cloned());
            if let Some(v) = self.table.get(&mm) {
                if v.re < -tol || v.im.abs() > tol {
                    bad.push(monomial_to_string(&mm));
                }
            }
        }
        bad
    }

    /// Parses lines of the form `A C = 0.7` or `A C = 0.7,-0.1`. `#` starts a
    /// comment.
    pub fn parse_table(text: &str) -> Result<Self> {
        let mut state = Self::new();
        let mut offset = 0;
        for line in text.lines() {
            let content = line.split('#').next().unwrap_or("");
            if !content.trim().is_empty() {
                let (lhs, rhs) = content.split_once('=').ok_or_else(|| {
                    Error::parse(offset, content.trim(), "expected `<monomial> = <value>`")
                })?;
                let monomial = parse::parse_monomial(lhs).map_err(|e| e.shifted(offset))?;
                let value = parse::parse_complex(rhs.trim())
                    .map_err(|_| Error::parse(offset + lhs.len() + 1, rhs.trim(), "invalid number"))?;
                state.insert(monomial, value);
            }
            offset += line.len() + 1;
        }
        Ok(state)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse_table(&std::fs::read_to_string(path)?)
    }
}

/// Every moment is a formal indeterminate.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymbolicState;

impl MomentOracle<Expr> for SymbolicState {
    fn moment(&self, monomial: &[ObservableSymbol]) -> Result<Expr> {
        let key: Vec<_> = monomial.iter().filter(|s| !s.is_identity()).cloned().collect();
        Ok(Expr::moment(key))
    }
}
