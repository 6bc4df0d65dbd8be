//! The asymptotic free algebra: copy-indexed letters, words in normal form and
//! polynomials over them.
//!
//! Only two simplifications ever happen to a word: identity symbols are
//! dropped, and consecutive letters living in the same copy are merged into a
//! single letter carrying the ordered product of their symbols.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::scalar::Coefficient;
use crate::state::MomentOracle;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObservableSymbol {
    name: String,
    adjoint: bool,
    is_identity: bool,
}

impl ObservableSymbol {
    pub fn new(name: impl Into<String>) -> Self {
        ObservableSymbol {
            name: name.into(),
            adjoint: false,
            is_identity: false,
        }
    }

    pub fn identity() -> Self {
        ObservableSymbol {
            name: "1".to_string(),
            adjoint: false,
            is_identity: true,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_adjoint(&self) -> bool {
        self.adjoint
    }

    pub fn is_identity(&self) -> bool {
        self.is_identity
    }

    /// The identity stays self-adjoint.
    pub fn adjoint(&self) -> Self {
        let mut s = self.clone();
        if !s.is_identity {
            s.adjoint = !s.adjoint;
        }
        s
    }
}

impl fmt::Display for ObservableSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        if self.adjoint {
            write!(f, "*")?;
        }
        Ok(())
    }
}

/// Adjoint of an ordered single-copy product: reversed, each factor adjointed.
pub fn monomial_adjoint(monomial: &[ObservableSymbol]) -> Vec<ObservableSymbol> {
    monomial.iter().rev().map(ObservableSymbol::adjoint).collect()
}

pub fn monomial_to_string(monomial: &[ObservableSymbol]) -> String {
    if monomial.is_empty() {
        return "1".to_string();
    }
    monomial.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")
}

/// An observable (or ordered product of observables) located in one copy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    copy: u32,
    monomial: Vec<ObservableSymbol>,
}

impl Letter {
    /// Panics if `copy == 0`; copies are numbered from 1.
    pub fn new(copy: u32, symbol: ObservableSymbol) -> Self {
        Self::monomial(copy, vec![symbol])
    }

    pub fn monomial(copy: u32, monomial: Vec<ObservableSymbol>) -> Self {
        assert!(copy >= 1, "copy indices start at 1");
        Letter { copy, monomial }
    }

    /// Shorthand for a plain named observable.
    pub fn named(name: &str, copy: u32) -> Self {
        Self::new(copy, ObservableSymbol::new(name))
    }

    pub fn copy(&self) -> u32 {
        self.copy
    }

    pub fn symbols(&self) -> &[ObservableSymbol] {
        &self.monomial
    }

    pub fn with_copy(&self, copy: u32) -> Self {
        Self::monomial(copy, self.monomial.clone())
    }

    pub fn adjoint(&self) -> Self {
        Letter {
            copy: self.copy,
            monomial: monomial_adjoint(&self.monomial),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.monomial.as_slice() {
            [single] => write!(f, "{}_{}", single, self.copy),
            many => write!(f, "({})_{}", monomial_to_string(many), self.copy),
        }
    }
}

/// A word in normal form. Construct through [`normalize`] or the parser.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

/// Drops identity symbols and merges consecutive same-copy letters.
pub fn normalize<I>(letters: I) -> Word
where
    I: IntoIterator<Item = Letter>,
{
    let mut out: Vec<Letter> = Vec::new();
    for letter in letters {
        let Letter { copy, monomial } = letter;
        let monomial: Vec<_> = monomial.into_iter().filter(|s| !s.is_identity()).collect();
        if monomial.is_empty() {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.copy == copy => last.monomial.extend(monomial),
            _ => out.push(Letter { copy, monomial }),
        }
    }
    Word { letters: out }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Checks the normal-form invariant.
    pub fn is_normal(&self) -> bool {
        self.letters.iter().all(|l| {
            l.copy >= 1 && !l.monomial.is_empty() && l.monomial.iter().all(|s| !s.is_identity())
        }) && self.letters.windows(2).all(|w| w[0].copy != w[1].copy)
    }

    pub fn concat(&self, other: &Word) -> Word {
        normalize(self.letters.iter().chain(other.letters.iter()).cloned())
    }

    pub fn adjoint(&self) -> Word {
        normalize(self.letters.iter().rev().map(Letter::adjoint))
    }

    /// Distinct copy indices in order of first appearance.
    pub fn copies(&self) -> Vec<u32> {
        let mut seen = Vec::new();
        for l in &self.letters {
            if !seen.contains(&l.copy) {
                seen.push(l.copy);
            }
        }
        seen
    }

    /// Relabels copies to 1, 2, ... by first appearance.
    pub fn canonical(&self) -> Word {
        let copies = self.copies();
        let relabel = |c: u32| copies.iter().position(|&x| x == c).unwrap() as u32 + 1;
        Word {
            letters: self.letters.iter().map(|l| l.with_copy(relabel(l.copy))).collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A finite linear combination of normal-form words. Zero coefficients are
/// never stored; the empty word is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    terms: BTreeMap<Word, S>,
}

impl<S: Coefficient> Default for Polynomial<S> {
    fn default() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }
}

impl<S: Coefficient> Polynomial<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::term(Word::identity(), S::one())
    }

    pub fn scalar(c: S) -> Self {
        Self::term(Word::identity(), c)
    }

    pub fn word(w: Word) -> Self {
        Self::term(w, S::one())
    }

    pub fn letter(l: Letter) -> Self {
        Self::word(normalize([l]))
    }

    pub fn term(w: Word, c: S) -> Self {
        let mut p = Self::zero();
        p.add_term(w, c);
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&S> {
        self.terms.get(w)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(w, sum);
                }
            }
            None => {
                self.terms.insert(w, c);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v.clone() * c.clone());
        }
        out
    }

    /// Bilinear extension of word concatenation followed by normalization.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                out.add_term(u.concat(v), a.clone() * b.clone());
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.adjoint(), c.conj());
        }
        out
    }

    pub fn product<'a, I>(factors: I) -> Self
    where
        I: IntoIterator<Item = &'a Self>,
        S: 'a,
    {
        factors.into_iter().fold(Self::identity(), |acc, f| acc.multiply(f))
    }

    /// Applies a linear functional defined on words.
    pub fn evaluate<F>(&self, mut on_word: F) -> Result<S>
    where
        F: FnMut(&Word) -> Result<S>,
    {
        let mut acc = S::zero();
        for (w, c) in &self.terms {
            acc = acc + c.clone() * on_word(w)?;
        }
        Ok(acc)
    }
}

impl<S: Coefficient + fmt::Display> fmt::Display for Polynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c}) {w}")?;
        }
        Ok(())
    }
}

/// `X - <X> 1`, kept as a single-copy template until placed at a copy.
#[derive(Clone, Debug, PartialEq)]
pub struct CenteredObservable<S> {
    monomial: Vec<ObservableSymbol>,
    mean: S,
}

impl<S: Coefficient> CenteredObservable<S> {
    pub fn mean(&self) -> &S {
        &self.mean
    }

    pub fn monomial(&self) -> &[ObservableSymbol] {
        &self.monomial
    }

    pub fn at(&self, copy: u32) -> Polynomial<S> {
        Polynomial::letter(Letter::monomial(copy, self.monomial.clone()))
            .sub(&Polynomial::scalar(self.mean.clone()))
    }
}

pub fn center<S, O>(symbol: &ObservableSymbol, state: &O) -> Result<CenteredObservable<S>>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    center_monomial(std::slice::from_ref(symbol), state)
}

pub fn center_monomial<S, O>(monomial: &[ObservableSymbol], state: &O) -> Result<CenteredObservable<S>>
where
    S: Coefficient,
    O: MomentOracle<S> + ?Sized,
{
    let mean = state.moment(monomial)?;
    Ok(CenteredObservable {
        monomial: monomial.to_vec(),
        mean,
    })
}
