//! KMS states of the Toeplitz algebra of a finite 2-graph.
//!
//! All computations take the weight point `x` as their parameter and run over
//! a [`KmsScalar`]: exact rationals when `x` is rational, `f64` otherwise.

mod classify;
mod critical;
mod dynamics;
mod independence;
mod simplex;
mod subinvariance;

use std::cmp::Ordering;

use num_rational::BigRational;
use thiserror::Error;

pub use classify::{
    classify_kms, Classification, ExtremeKind, ExtremePoint, QuotientStep, Regime,
    StepReason,
};
pub use critical::{
    component_statuses, critical_beta, kms1_critical_sink, kms_exists, sink_state,
    vanishing_deduction, ColorStatus, ComponentCritical, ComponentStatus, CriticalBetaReport,
    CriticalTerm, DeductionVerdict, ExistenceVerdict, SinkState, VanishingDeduction,
};
pub use dynamics::{Dynamics, Rate, WeightPoint};
pub use independence::{log_ratio, prime_exponents, rationally_independent};
pub use simplex::{kms_simplex, SimplexExtreme, SimplexReport};
pub use subinvariance::{
    m_matrix, y_bruteforce, y_closed, ClosedForm, FamilyFormula, SeriesEstimate, SeriesSum,
    SubinvarianceMethod, SubinvarianceRegistry, SubinvarianceVector, DEFAULT_SERIES_CAP,
};

use crate::exhaustive::ExhaustiveError;
use crate::field::OrderedField;
use crate::graph::{spectral, Color, CountMatrix, GraphError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KmsError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Exhaustive(#[from] ExhaustiveError),
    #[error("invalid dynamics: {0}")]
    InvalidDynamics(String),
    #[error("the series for y diverges: x{} * rho(A{}) >= 1", .0.number(), .0.number())]
    Divergent(Color),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconsistent skeleton: {0}")]
    Inconsistent(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Scalars the engine can branch on, including comparisons of `x_i * rho`.
pub trait KmsScalar: OrderedField {
    /// Compares `rho(t * m)` with 1.
    fn radius_cmp(m: &CountMatrix, t: &Self) -> Ordering;
}

impl KmsScalar for BigRational {
    fn radius_cmp(m: &CountMatrix, t: &Self) -> Ordering {
        spectral::scaled_radius_cmp_exact(m, t)
    }
}

impl KmsScalar for f64 {
    fn radius_cmp(m: &CountMatrix, t: &Self) -> Ordering {
        spectral::scaled_radius_cmp_float(m, *t)
    }
}
