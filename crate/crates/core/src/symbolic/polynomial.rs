use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::field::format_rational;

/// Exponent pair `(e1, e2)` of the monomial `x1^e1 x2^e2`.
pub type Exponent = (u32, u32);

/// Polynomial in `x1, x2` with exact rational coefficients; zero terms are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial2 {
    terms: BTreeMap<Exponent, BigRational>,
}

impl Polynomial2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn integer(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    pub fn monomial(c: BigRational, e1: u32, e2: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((e1, e2), c);
        }
        Self { terms }
    }

    pub fn x1() -> Self {
        Self::monomial(BigRational::one(), 1, 0)
    }

    pub fn x2() -> Self {
        Self::monomial(BigRational::one(), 0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e1: u32, e2: u32) -> BigRational {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Constant value when the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&(0, 0)).cloned(),
            _ => None,
        }
    }

    /// Largest exponent in lexicographic order together with its coefficient.
    pub fn leading(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    fn accumulate(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn eval(&self, x1: &BigRational, x2: &BigRational) -> BigRational {
        self.eval_in(x1, x2)
    }

    /// Evaluates in any field, e.g. `f64` or a rational function.
    pub fn eval_in<S: crate::field::Field>(&self, x1: &S, x2: &S) -> S {
        self.terms.iter().fold(S::zero(), |acc, ((e1, e2), c)| {
            acc + S::from_rational(c) * x1.pow(*e1) * x2.pow(*e2)
        })
    }

    pub fn pow(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &Polynomial2 {
    type Output = Polynomial2;
    fn add(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, c.clone());
        }
        out
    }
}

impl Sub for &Polynomial2 {
    type Output = Polynomial2;
    fn sub(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.accumulate(*e, -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial2 {
    type Output = Polynomial2;
    fn mul(self, rhs: &Polynomial2) -> Polynomial2 {
        let mut out = Polynomial2::zero();
        for ((a1, a2), c) in &self.terms {
            for ((b1, b2), d) in &rhs.terms {
                out.accumulate((a1 + b1, a2 + b2), c * d);
            }
        }
        out
    }
}

impl Neg for &Polynomial2 {
    type Output = Polynomial2;
    fn neg(self) -> Polynomial2 {
        Polynomial2 {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial2 {
            type Output = Polynomial2;
            fn $m(self, rhs: Polynomial2) -> Polynomial2 {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial2 {
    type Output = Polynomial2;
    fn neg(self) -> Polynomial2 {
        -&self
    }
}

impl fmt::Display for Polynomial2 {
    /// Terms in increasing lexicographic order of `(e1, e2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, ((e1, e2), c)) in self.terms.iter().enumerate() {
            let magnitude = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if !magnitude.is_one() || (*e1 == 0 && *e2 == 0) {
                factors.push(format_rational(&magnitude));
            }
            for (name, e) in [("x1", e1), ("x2", e2)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}
