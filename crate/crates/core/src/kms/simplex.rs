//! The simplex of KMS states when both series converge.

use super::subinvariance::m_matrix;
use super::{KmsError, KmsScalar};
use crate::exhaustive::{factorization_checks, FactorVerdict, RelationCheck};
use crate::graph::TwoGraphSkeleton;

/// The extreme point `phi_eps` for `eps = y_v^{-1} delta_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexExtreme<S> {
    pub vertex: usize,
    /// The nonzero entry `y_v^{-1}` of `eps`.
    pub weight: S,
    /// `m(eps)`: the state's values on the vertex projections.
    pub values: Vec<S>,
    pub verdict: FactorVerdict,
    pub checks: Vec<RelationCheck<S>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexReport<S> {
    pub y: Vec<S>,
    pub extremes: Vec<SimplexExtreme<S>>,
}

impl<S> SimplexReport<S> {
    pub fn dimension(&self) -> usize {
        self.extremes.len().saturating_sub(1)
    }
}

/// Extreme points `m(eps_v) = M e_v / y_v` for every vertex, with factorization verdicts.
pub fn kms_simplex<S: KmsScalar>(
    g: &TwoGraphSkeleton,
    x: &[S; 2],
) -> Result<SimplexReport<S>, KmsError> {
    let m = m_matrix(g, x)?;
    let y = m.column_sums();
    let mut extremes = Vec::with_capacity(g.vertex_count());
    for (v, yv) in y.iter().enumerate() {
        // y_v >= 1 because the vertex itself is a path.
        let weight = S::one() / yv.clone();
        let values: Vec<S> = m
            .column(v)
            .into_iter()
            .map(|e| e * weight.clone())
            .collect();
        let (verdict, checks) = factorization_checks(g, &values, x)?;
        extremes.push(SimplexExtreme {
            vertex: v,
            weight,
            values,
            verdict,
            checks,
        });
    }
    Ok(SimplexReport { y, extremes })
}
