use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Polynomial2, SymbolicError};

/// Quotient of two [`Polynomial2`]s. The representation is not reduced;
/// equality is decided by cross-multiplication.
#[derive(Debug, Clone)]
pub struct RationalFunction2 {
    numerator: Polynomial2,
    denominator: Polynomial2,
}

impl RationalFunction2 {
    pub fn new(numerator: Polynomial2, denominator: Polynomial2) -> Result<Self, SymbolicError> {
        if denominator.is_zero() {
            return Err(SymbolicError::ZeroDenominator);
        }
        Ok(Self::normalized(numerator, denominator))
    }

    pub fn from_polynomial(p: Polynomial2) -> Self {
        Self {
            numerator: p,
            denominator: Polynomial2::one(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_polynomial(Polynomial2::constant(c))
    }

    pub fn x1() -> Self {
        Self::from_polynomial(Polynomial2::x1())
    }

    pub fn x2() -> Self {
        Self::from_polynomial(Polynomial2::x2())
    }

    pub fn numerator(&self) -> &Polynomial2 {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial2 {
        &self.denominator
    }

    /// Fixes a canonical scaling (monic in the lexicographically largest
    /// denominator term) and folds away constant ratios.
    fn normalized(numerator: Polynomial2, denominator: Polynomial2) -> Self {
        if numerator.is_zero() {
            return Self::from_polynomial(Polynomial2::zero());
        }
        if let Some(c) = denominator.as_constant() {
            return Self::from_polynomial(numerator.scale(&c.recip()));
        }
        let (_, lead_den) = denominator.leading().expect("nonzero denominator");
        let (_, lead_num) = numerator.leading().expect("nonzero numerator");
        let ratio = lead_num / lead_den;
        if numerator == denominator.scale(&ratio) {
            return Self::constant(ratio);
        }
        let inv = lead_den.recip();
        Self {
            numerator: numerator.scale(&inv),
            denominator: denominator.scale(&inv),
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, SymbolicError> {
        if rhs.numerator.is_zero() {
            return Err(SymbolicError::DivisionByZero);
        }
        Ok(Self::normalized(
            &self.numerator * &rhs.denominator,
            &self.denominator * &rhs.numerator,
        ))
    }

    pub fn recip(&self) -> Result<Self, SymbolicError> {
        Self::from_polynomial(Polynomial2::one()).checked_div(self)
    }

    /// Exact value at `(x1, x2)`.
    pub fn eval(&self, x1: &BigRational, x2: &BigRational) -> Result<BigRational, SymbolicError> {
        let den = self.denominator.eval(x1, x2);
        if den.is_zero() {
            return Err(SymbolicError::Pole(Box::new([x1.clone(), x2.clone()])));
        }
        Ok(self.numerator.eval(x1, x2) / den)
    }

    pub fn eval_f64(&self, x1: f64, x2: f64) -> f64 {
        self.numerator.eval_in(&x1, &x2) / self.denominator.eval_in(&x1, &x2)
    }

    /// Agreement as rational functions: `f/g = p/q` iff `f q = p g`.
    pub fn equals(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl PartialEq for RationalFunction2 {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Add for RationalFunction2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if self.denominator == rhs.denominator {
            return Self::normalized(&self.numerator + &rhs.numerator, self.denominator);
        }
        Self::normalized(
            &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator),
            &self.denominator * &rhs.denominator,
        )
    }
}

impl Sub for RationalFunction2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::normalized(
            &self.numerator * &rhs.numerator,
            &self.denominator * &rhs.denominator,
        )
    }
}

impl Div for RationalFunction2 {
    type Output = Self;
    /// Panics on division by the zero function; see [`RationalFunction2::checked_div`].
    fn div(self, rhs: Self) -> Self {
        self.checked_div(&rhs).expect("division by the zero rational function")
    }
}

impl Neg for RationalFunction2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            numerator: -self.numerator,
            denominator: self.denominator,
        }
    }
}

impl crate::field::Field for RationalFunction2 {
    fn zero() -> Self {
        Self::from_polynomial(Polynomial2::zero())
    }
    fn one() -> Self {
        Self::from_polynomial(Polynomial2::one())
    }
    fn from_rational(q: &BigRational) -> Self {
        Self::constant(q.clone())
    }
    fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }
    fn pivot_weight(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
}

impl fmt::Display for RationalFunction2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.as_constant().is_some_and(|c| c.is_one()) {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "({}) / ({})", self.numerator, self.denominator)
        }
    }
}
