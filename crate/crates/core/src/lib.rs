//! KMS states on Toeplitz algebras of finite 2-graphs, computed from the
//! vertex matrices of the skeleton.

pub mod builtins;
pub mod cli;
pub mod exhaustive;
pub mod families;
pub mod field;
pub mod graph;
pub mod identities;
pub mod kms;
pub mod linalg;
pub mod report;
pub mod symbolic;
