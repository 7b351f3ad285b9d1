//! Named instances shipped with the CLI.
//!
//! The four-vertex instance has blue loops 2 at `u` and 8 at `x`, red loops
//! 6 and 12, blue `v -> u` 6, red `v -> u` 18, blue `x -> w` 12 and red
//! `x -> w` 18. The remaining single edges (`w -> u` blue, `w -> v` red,
//! `x -> v` blue) are each 1; those values are forced by requiring that
//! `(3, 1, 12, 8)` is a common eigenvector with eigenvalues 8 and 12.
//! The two- and three-vertex instances are its quotients by `{w, x}` and `{x}`.

use crate::graph::TwoGraphSkeleton;

pub const BUILTIN_NAMES: [&str; 3] = ["paper-2vertex", "paper-3vertex", "paper-4vertex"];

pub fn builtin(name: &str) -> Option<TwoGraphSkeleton> {
    match name {
        "paper-2vertex" => Some(paper_two_vertex()),
        "paper-3vertex" => Some(paper_three_vertex()),
        "paper-4vertex" => Some(paper_four_vertex()),
        _ => None,
    }
}

fn build(names: &[&str], blue: Vec<Vec<i64>>, red: Vec<Vec<i64>>) -> TwoGraphSkeleton {
    TwoGraphSkeleton::new(names.iter().map(|s| s.to_string()).collect(), blue, red)
        .expect("builtin instance is well formed")
}

/// One absolute source `v` feeding the looped vertex `u`: `d = (2, 6)`, `a = (6, 18)`.
pub fn paper_two_vertex() -> TwoGraphSkeleton {
    build(
        &["u", "v"],
        vec![vec![2, 6], vec![0, 0]],
        vec![vec![6, 18], vec![0, 0]],
    )
}

/// Adds the absolute source `w` with `b = (1, 1)`.
pub fn paper_three_vertex() -> TwoGraphSkeleton {
    build(
        &["u", "v", "w"],
        vec![vec![2, 6, 1], vec![0, 0, 0], vec![0, 0, 0]],
        vec![vec![6, 18, 0], vec![0, 0, 1], vec![0, 0, 0]],
    )
}

/// The source-free four-vertex instance: `c = (12, 18)`, `g1 = 1`, `f = (8, 12)`.
pub fn paper_four_vertex() -> TwoGraphSkeleton {
    build(
        &["u", "v", "w", "x"],
        vec![
            vec![2, 6, 1, 0],
            vec![0, 0, 0, 1],
            vec![0, 0, 0, 12],
            vec![0, 0, 0, 8],
        ],
        vec![
            vec![6, 18, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 18],
            vec![0, 0, 0, 12],
        ],
    )
}
