//! Commutative polynomials in formal marginal moments `<M>`, with exact
//! rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalar::Coefficient;
use crate::word::{monomial_adjoint, monomial_to_string, ObservableSymbol};

/// A formal marginal moment `<M>` of an ordered single-copy monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Moment(pub Vec<ObservableSymbol>);

impl fmt::Display for Moment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner: String = monomial_to_string(&self.0).split(' ').collect::<Vec<_>>().join("");
        write!(f, "<{inner}>")
    }
}

/// Sorted `(moment, power)` factors.
type Monomial = Vec<(Moment, u32)>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Expr {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Expr {
    pub fn constant(c: BigRational) -> Self {
        let mut e = Expr::default();
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    pub fn integer(v: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(v)))
    }

    /// The formal value `<monomial>`. The empty monomial is the identity, `<1> = 1`.
    pub fn moment(monomial: Vec<ObservableSymbol>) -> Self {
        if monomial.is_empty() {
            return Self::one();
        }
        let mut e = Expr::default();
        e.terms.insert(vec![(Moment(monomial), 1)], BigRational::one());
        e
    }

    /// Convenience: `<A C>` from whitespace-separated plain symbol names.
    pub fn moment_of(names: &str) -> Self {
        Self::moment(names.split_whitespace().map(ObservableSymbol::new).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    /// Substitutes numeric values for every formal moment.
    pub fn evaluate<F>(&self, mut value: F) -> f64
    where
        F: FnMut(&Moment) -> f64,
    {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.iter()
                    .fold(crate::scalar::rational_to_f64(c), |acc, (mom, p)| acc * value(mom).powi(*p as i32))
            })
            .sum()
    }
}

fn mul_monomials(a: &Monomial, b: &Monomial) -> Monomial {
    let mut map: BTreeMap<Moment, u32> = BTreeMap::new();
    for (m, p) in a.iter().chain(b.iter()) {
        *map.entry(m.clone()).or_insert(0) += p;
    }
    map.into_iter().collect()
}

impl Zero for Expr {
    fn zero() -> Self {
        Expr::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Expr {
    fn one() -> Self {
        Self::integer(1)
    }
}

impl Add for Expr {
    type Output = Expr;

    fn add(mut self, rhs: Expr) -> Expr {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Neg for Expr {
    type Output = Expr;

    fn neg(mut self) -> Expr {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Sub for Expr {
    type Output = Expr;

    fn sub(self, rhs: Expr) -> Expr {
        self + (-rhs)
    }
}

impl Mul for Expr {
    type Output = Expr;

    fn mul(self, rhs: Expr) -> Expr {
        let mut out = Expr::default();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(mul_monomials(ma, mb), ca * cb);
            }
        }
        out
    }
}

impl Coefficient for Expr {
    /// Conjugation maps `<M>` to `<M*>`.
    fn conj(&self) -> Self {
        let mut out = Expr::default();
        for (m, c) in &self.terms {
            let mut conj: Vec<(Moment, u32)> = m
                .iter()
                .map(|(mom, p)| (Moment(monomial_adjoint(&mom.0)), *p))
                .collect();
            conj.sort();
            out.add_term(mul_monomials(&conj, &Vec::new()), c.clone());
        }
        out
    }

    fn from_i64(v: i64) -> Self {
        Self::integer(v)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Self::constant(BigRational::from_integer(v.clone()))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Higher-degree terms last, as written by hand.
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(m, _)| m.iter().map(|(_, p)| *p).sum::<u32>());
        for (i, (m, c)) in terms.into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { "-" } else { "+" })?;
            }
            let unit = abs.is_one();
            if !unit || m.is_empty() {
                write!(f, "{abs}")?;
            }
            for (mom, p) in m {
                write!(f, "{mom}")?;
                if *p > 1 {
                    write!(f, "^{p}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_commutative_and_collects_powers() {
        let a = Expr::moment_of("A");
        let b = Expr::moment_of("B");
        assert_eq!(a.clone() * b.clone(), b.clone() * a.clone());
        let sq = a.clone() * a.clone();
        assert_eq!(sq.to_string(), "<A>^2");
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn conjugation_adjoints_moments() {
        let ac = Expr::moment_of("A C");
        assert_eq!(ac.conj().to_string(), "<C*A*>");
        assert_eq!(ac.conj().conj(), ac);
    }

    #[test]
    fn display_orders_by_degree() {
        let e = Expr::moment_of("A") * Expr::moment_of("B") - Expr::moment_of("B") + Expr::integer(2);
        assert_eq!(e.to_string(), "2 - <B> + <A><B>");
    }
}
