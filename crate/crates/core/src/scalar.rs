//! Coefficient rings used by polynomials and moment evaluators.
//!
//! Three concrete rings are supported: complex doubles (the default numeric
//! path), exact rationals, and [`Expr`](crate::symbolic::Expr), a commutative
//! polynomial in formal marginal moments used to reproduce identities without
//! choosing numbers.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    /// Complex conjugation (the scalar part of taking adjoints).
    fn conj(&self) -> Self;

    fn from_i64(v: i64) -> Self;

    fn from_bigint(v: &BigInt) -> Self;
}

impl Coefficient for Complex64 {
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(bigint_to_f64(v), 0.0)
    }
}

impl Coefficient for f64 {
    fn conj(&self) -> Self {
        *self
    }

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_bigint(v: &BigInt) -> Self {
        bigint_to_f64(v)
    }
}

impl Coefficient for BigRational {
    fn conj(&self) -> Self {
        self.clone()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
}

/// Falling factorial n (n-1) ... (n-k+1) as an exact integer.
pub fn falling_factorial(n: u64, k: usize) -> BigInt {
    (0..k as u64).fold(BigInt::one(), |acc, j| {
        if j >= n {
            BigInt::zero()
        } else {
            acc * BigInt::from(n - j)
        }
    })
}

pub fn bigint_to_f64(v: &BigInt) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}
