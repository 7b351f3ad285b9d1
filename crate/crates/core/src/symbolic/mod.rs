//! Exact polynomial and rational-function arithmetic in `x1 = e^{-beta r1}`, `x2 = e^{-beta r2}`.

mod polynomial;
mod rational_function;

use num_rational::BigRational;
use thiserror::Error;

pub use polynomial::{Exponent, Polynomial2};
pub use rational_function::RationalFunction2;

use crate::field::format_rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolicError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("division by the zero rational function")]
    DivisionByZero,
    #[error("pole at x = ({}, {})", format_rational(&.0[0]), format_rational(&.0[1]))]
    Pole(Box<[BigRational; 2]>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Field arithmetic on rational functions; only `Div` can fail.
pub fn rf_arith(
    op: ArithOp,
    f: &RationalFunction2,
    g: &RationalFunction2,
) -> Result<RationalFunction2, SymbolicError> {
    Ok(match op {
        ArithOp::Add => f.clone() + g.clone(),
        ArithOp::Sub => f.clone() - g.clone(),
        ArithOp::Mul => f.clone() * g.clone(),
        ArithOp::Div => f.checked_div(g)?,
    })
}

pub fn rf_equal(f: &RationalFunction2, g: &RationalFunction2) -> bool {
    f.equals(g)
}

pub fn rf_eval(
    f: &RationalFunction2,
    x1: &BigRational,
    x2: &BigRational,
) -> Result<BigRational, SymbolicError> {
    f.eval(x1, x2)
}

/// `1 - c * x_i` as a polynomial, for the recurring geometric-series factors.
pub fn one_minus(c: i64, color_index: usize) -> Polynomial2 {
    let x = if color_index == 0 {
        Polynomial2::x1()
    } else {
        Polynomial2::x2()
    };
    &Polynomial2::one() - &x.scale(&BigRational::from_integer(c.into()))
}
