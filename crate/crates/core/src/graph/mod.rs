//! Finite 2-graph skeletons at the level of vertex matrices.

mod components;
mod skeleton;
pub mod spectral;

use thiserror::Error;

pub use components::Component;
pub use skeleton::{
    Color, CountMatrix, Degree, SkeletonDocument, TwoGraphSkeleton, ValidationReport,
    VertexSubset, Violation, DEFAULT_DEGREE_CAP,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("{matrix} matrix must be {vertices}x{vertices}")]
    DimensionMismatch {
        matrix: &'static str,
        vertices: usize,
    },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("skeleton is not a 2-graph skeleton ({} violation(s))", .0.violations.len())]
    InvalidSkeleton(ValidationReport),
    #[error("vertex set {0:?} is not hereditary")]
    NotHereditary(Vec<String>),
    #[error("total degree {total} exceeds the configured cap {cap}")]
    DegreeCapExceeded { total: u32, cap: u32 },
}
