//! Scalar abstraction shared by the exact, floating and symbolic code paths.
//!
//! Every formula in this crate is a rational expression in the weight point
//! `x = (x1, x2)`, so the engine is written once against [`Field`] and run with
//! [`BigRational`] (authoritative), `f64` (physical `(r, beta)` input) or
//! [`RationalFunction2`](crate::symbolic::RationalFunction2) (identity checks).

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Absolute tolerance for sign decisions on `f64` quantities.
pub const FLOAT_TOL: f64 = 1e-9;

/// Relative tolerance for deciding that `x_i * rho` equals one in float mode.
pub const CRITICAL_TOL: f64 = 1e-12;

pub trait Field:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(q: &BigRational) -> Self;
    /// Exact zero test; used to reject elimination pivots.
    fn is_zero(&self) -> bool;
    /// Magnitude used to rank elimination pivots.
    fn pivot_weight(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn from_biguint(n: &BigUint) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n.clone())))
    }

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

/// A field with a (possibly tolerant) order, used wherever the engine branches
/// on signs: criticality, positivity deductions, pruning.
pub trait OrderedField: Field {
    /// Sign of the value; `f64` treats `|v| <= FLOAT_TOL` as zero.
    fn sign(&self) -> Ordering;
    fn to_f64(&self) -> f64;
    fn to_number(&self) -> Number;
    /// Is this the exact (rational) instantiation?
    fn is_exact() -> bool;

    /// Compare `self` against `other` using [`OrderedField::sign`] of the difference.
    fn cmp_tol(&self, other: &Self) -> Ordering {
        (self.clone() - other.clone()).sign()
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn pivot_weight(&self) -> f64 {
        if Zero::is_zero(self) {
            0.0
        } else {
            1.0
        }
    }
}

impl OrderedField for BigRational {
    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
    fn to_f64(&self) -> f64 {
        rational_to_f64(self)
    }
    fn to_number(&self) -> Number {
        Number::Exact(self.clone())
    }
    fn is_exact() -> bool {
        true
    }
}

impl Field for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn pivot_weight(&self) -> f64 {
        self.abs()
    }
}

impl OrderedField for f64 {
    fn sign(&self) -> Ordering {
        if self.abs() <= FLOAT_TOL {
            Ordering::Equal
        } else if *self > 0.0 {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_number(&self) -> Number {
        Number::Approx(*self)
    }
    fn is_exact() -> bool {
        false
    }
}

/// Converts a big rational to the nearest `f64`, surviving huge numerators
/// and denominators that overflow a direct conversion.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = q.numer().bits().max(q.denom().bits()) as i64 - 900;
    let (n, d) = if shift > 0 {
        (q.numer() >> shift as usize, q.denom() >> shift as usize)
    } else {
        (q.numer().clone(), q.denom().clone())
    };
    let n = n.to_f64().unwrap_or(f64::NAN);
    let d = d.to_f64().unwrap_or(f64::NAN);
    n / d
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.9` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            s => s.parse().ok()?,
        };
        let frac_part: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let mut value = BigRational::new(int_part * &scale + frac_part, scale);
        if negative {
            value = -value;
        }
        return Some(value);
    }
    text.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// A reported scalar: exact when the computation ran in exact mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(BigRational),
    Approx(f64),
}

impl Number {
    pub fn to_f64(&self) -> f64 {
        match self {
            Number::Exact(q) => rational_to_f64(q),
            Number::Approx(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Number::Exact(q) => Some(q),
            Number::Approx(_) => None,
        }
    }

    pub fn rendered(&self) -> RenderedNumber {
        RenderedNumber {
            exact: self.exact().map(format_rational),
            decimal: self.to_f64(),
        }
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Number::Exact(q) => write!(f, "{}", format_rational(q)),
            Number::Approx(v) => write!(f, "{v:.12}"),
        }
    }
}

/// Serialized form of a [`Number`]: `"p/q"` string when exact plus a decimal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderedNumber {
    pub exact: Option<String>,
    pub decimal: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("3/24"), Some(q(1, 8)));
        assert_eq!(parse_rational("0.9"), Some(q(9, 10)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn huge_rationals_convert() {
        let big = BigRational::new(
            num_traits::pow(BigInt::from(3), 2000),
            num_traits::pow(BigInt::from(3), 1999) * BigInt::from(2),
        );
        assert!((rational_to_f64(&big) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn float_sign_uses_tolerance() {
        assert_eq!(1e-12f64.sign(), Ordering::Equal);
        assert_eq!((-1e-3f64).sign(), Ordering::Less);
        assert_eq!(q(-1, 3).sign(), Ordering::Less);
    }
}
