use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::KmsError;
use crate::field::{format_rational, rational_to_f64, Number};

/// A positive weight `r_i`, either `ln k` for an integer `k >= 2` or a real number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    Log(u64),
    Real(f64),
}

impl Rate {
    pub fn value(&self) -> f64 {
        match self {
            Rate::Log(k) => (*k as f64).ln(),
            Rate::Real(r) => *r,
        }
    }

    /// Accepts `ln8`, `ln(8)`, `ln 8` or a decimal such as `2.5`.
    pub fn parse(text: &str) -> Option<Rate> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("ln") {
            let inner = rest.trim().trim_start_matches('(').trim_end_matches(')').trim();
            return inner.parse::<u64>().ok().map(Rate::Log);
        }
        t.parse::<f64>().ok().filter(|r| r.is_finite()).map(Rate::Real)
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Log(k) => write!(f, "ln({k})"),
            Rate::Real(r) => write!(f, "{r}"),
        }
    }
}

/// The weight point `x = (e^{-beta r_1}, e^{-beta r_2})`.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightPoint {
    Exact([BigRational; 2]),
    Approx([f64; 2]),
}

impl WeightPoint {
    pub fn is_exact(&self) -> bool {
        matches!(self, WeightPoint::Exact(_))
    }

    pub fn to_f64(&self) -> [f64; 2] {
        match self {
            WeightPoint::Exact(x) => [rational_to_f64(&x[0]), rational_to_f64(&x[1])],
            WeightPoint::Approx(x) => *x,
        }
    }

    pub fn numbers(&self) -> [Number; 2] {
        match self {
            WeightPoint::Exact(x) => [Number::Exact(x[0].clone()), Number::Exact(x[1].clone())],
            WeightPoint::Approx(x) => [Number::Approx(x[0]), Number::Approx(x[1])],
        }
    }
}

impl fmt::Display for WeightPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightPoint::Exact(x) => {
                write!(f, "({}, {})", format_rational(&x[0]), format_rational(&x[1]))
            }
            WeightPoint::Approx(x) => write!(f, "({:.12}, {:.12})", x[0], x[1]),
        }
    }
}

/// The dynamics `alpha^r` at inverse temperature `beta`, carried internally as
/// its weight point.
#[derive(Debug, Clone, PartialEq)]
pub struct Dynamics {
    rates: Option<[Rate; 2]>,
    beta: Option<BigRational>,
    x: WeightPoint,
}

impl Dynamics {
    /// From `(r, beta)`. The weight point is exact whenever every
    /// `k_i^{-beta}` is rational, e.g. `r = ln 8` with `beta = 1/3`.
    pub fn from_rates(rates: [Rate; 2], beta: BigRational) -> Result<Self, KmsError> {
        if !beta.is_positive() {
            return Err(KmsError::InvalidDynamics(format!(
                "beta must be positive, got {}",
                format_rational(&beta)
            )));
        }
        for r in &rates {
            let ok = match r {
                Rate::Log(k) => *k >= 2,
                Rate::Real(v) => *v > 0.0 && v.is_finite(),
            };
            if !ok {
                return Err(KmsError::InvalidDynamics(format!("rate {r} is not positive")));
            }
        }
        let exact: Option<Vec<BigRational>> = rates
            .iter()
            .map(|r| match r {
                Rate::Log(k) => exact_power(*k, &beta),
                Rate::Real(_) => None,
            })
            .collect();
        let x = match exact {
            Some(v) => WeightPoint::Exact([v[0].clone(), v[1].clone()]),
            None => {
                let b = rational_to_f64(&beta);
                WeightPoint::Approx(rates.map(|r| (-b * r.value()).exp()))
            }
        };
        Ok(Self {
            rates: Some(rates),
            beta: Some(beta),
            x,
        })
    }

    /// Exact mode: `x` given directly, each coordinate in `(0, 1]`.
    pub fn from_weights(x: [BigRational; 2]) -> Result<Self, KmsError> {
        for xi in &x {
            if !xi.is_positive() || *xi > BigRational::one() {
                return Err(KmsError::InvalidDynamics(format!(
                    "weight {} is outside (0, 1]",
                    format_rational(xi)
                )));
            }
        }
        Ok(Self {
            rates: None,
            beta: None,
            x: WeightPoint::Exact(x),
        })
    }

    pub fn from_weights_f64(x: [f64; 2]) -> Result<Self, KmsError> {
        for xi in x {
            if !(xi > 0.0 && xi <= 1.0) {
                return Err(KmsError::InvalidDynamics(format!(
                    "weight {xi} is outside (0, 1]"
                )));
            }
        }
        Ok(Self {
            rates: None,
            beta: None,
            x: WeightPoint::Approx(x),
        })
    }

    pub fn rates(&self) -> Option<&[Rate; 2]> {
        self.rates.as_ref()
    }

    pub fn beta(&self) -> Option<&BigRational> {
        self.beta.as_ref()
    }

    pub fn weight_point(&self) -> &WeightPoint {
        &self.x
    }
}

/// `k^{-beta}` when it is rational: `beta = p/q` needs `k` to be a perfect `q`-th power.
fn exact_power(k: u64, beta: &BigRational) -> Option<BigRational> {
    let p = beta.numer().to_u32()?;
    let q = beta.denom().to_u32()?;
    let root = integer_root(k, q)?;
    let denom = num_traits::pow(BigInt::from(root), p as usize);
    Some(BigRational::new(BigInt::one(), denom))
}

fn integer_root(k: u64, q: u32) -> Option<u64> {
    if q == 1 {
        return Some(k);
    }
    let guess = (k as f64).powf(1.0 / q as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| {
        m > 0 && num_traits::pow(BigUint::from(m), q as usize) == BigUint::from(k)
    })
}
