//! Spectral radii of nonnegative integer matrices.
//!
//! A nonnegative matrix is block triangular over the strongly connected
//! components of its own digraph, so its spectral radius is the largest radius
//! of an irreducible diagonal block. For an irreducible block `B` and `t > 0`,
//! `rho(tB) < 1` iff every leading principal minor of `I - tB` is positive, and
//! `rho(tB) = 1` iff the proper leading minors are positive and the determinant
//! vanishes. Both tests are exact over the rationals.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::components::scc_labels;
use super::skeleton::{Color, CountMatrix, TwoGraphSkeleton};
use super::GraphError;
use crate::field::CRITICAL_TOL;

impl TwoGraphSkeleton {
    pub fn spectral_radius(&self, color: Color) -> Result<f64, GraphError> {
        self.ensure_valid()?;
        Ok(matrix_spectral_radius(self.matrix(color)))
    }
}

/// Irreducible diagonal blocks (with their index sets) of a nonnegative matrix.
/// Blocks with zero radius (acyclic singletons) are omitted.
pub fn irreducible_blocks(m: &CountMatrix) -> Vec<Vec<usize>> {
    let n = m.size();
    let succ: Vec<Vec<usize>> = (0..n)
        .map(|s| (0..n).filter(|&r| m.get(r, s) > 0).collect())
        .collect();
    let labels = scc_labels(&succ);
    let count = labels.iter().copied().max().map_or(0, |c| c + 1);
    let mut blocks = vec![Vec::new(); count];
    for (v, &c) in labels.iter().enumerate() {
        blocks[c].push(v);
    }
    blocks
        .into_iter()
        .filter(|b| b.len() > 1 || m.get(b[0], b[0]) > 0)
        .collect()
}

pub fn matrix_spectral_radius(m: &CountMatrix) -> f64 {
    irreducible_blocks(m)
        .iter()
        .map(|b| block_radius(&m.restrict(b)))
        .fold(0.0, f64::max)
}

fn block_radius(b: &CountMatrix) -> f64 {
    let n = b.size();
    if n == 1 {
        return b.get(0, 0) as f64;
    }
    // rho lies between the smallest and largest row sums.
    let sums: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| b.get(i, j) as f64).sum())
        .collect();
    let mut lo = sums.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = sums.iter().copied().fold(0.0, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // rho < mid  <=>  leading minors of (mid I - B) all positive
        if leading_minors_positive_f64(b, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn leading_minors_positive_f64(b: &CountMatrix, lambda: f64) -> bool {
    let n = b.size();
    let mut a: Vec<f64> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            (if i == j { lambda } else { 0.0 }) - b.get(i, j) as f64
        })
        .collect();
    for k in 0..n {
        let p = a[k * n + k];
        if p <= 0.0 {
            return false;
        }
        for i in k + 1..n {
            let f = a[i * n + k] / p;
            for j in k..n {
                a[i * n + j] -= f * a[k * n + j];
            }
        }
    }
    true
}

/// Exact comparison of `rho(t * m)` with 1.
pub fn scaled_radius_cmp_exact(m: &CountMatrix, t: &BigRational) -> Ordering {
    irreducible_blocks(m)
        .iter()
        .map(|blk| irreducible_scaled_cmp(&m.restrict(blk), t))
        .max()
        .unwrap_or(Ordering::Less)
}

fn irreducible_scaled_cmp(b: &CountMatrix, t: &BigRational) -> Ordering {
    let n = b.size();
    let mut a: Vec<BigRational> = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let id = if i == j { BigRational::one() } else { BigRational::zero() };
            id - t * BigRational::from_integer(b.get(i, j).into())
        })
        .collect();
    // Pivot k equals minor_{k+1} / minor_k, so the signs of the leading
    // minors are read off the pivots while earlier ones stay positive.
    for k in 0..n {
        let p = a[k * n + k].clone();
        if k + 1 < n && !p.is_positive() {
            return Ordering::Greater;
        }
        if k + 1 == n {
            return if p.is_positive() {
                Ordering::Less
            } else if p.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Greater
            };
        }
        for i in k + 1..n {
            if a[i * n + k].is_zero() {
                continue;
            }
            let f = &a[i * n + k] / &p;
            for j in k..n {
                let v = &a[i * n + j] - &f * &a[k * n + j];
                a[i * n + j] = v;
            }
        }
    }
    Ordering::Less
}

/// Float comparison of `rho(t * m)` with 1 at relative tolerance [`CRITICAL_TOL`].
pub fn scaled_radius_cmp_float(m: &CountMatrix, t: f64) -> Ordering {
    let value = t * matrix_spectral_radius(m);
    if (value - 1.0).abs() <= CRITICAL_TOL {
        Ordering::Equal
    } else if value < 1.0 {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// The spectral radius when it is an integer, verified exactly.
pub fn integer_radius(m: &CountMatrix) -> Option<u64> {
    let approx = matrix_spectral_radius(m);
    let k = approx.round();
    if (approx - k).abs() > 1e-6 || k < 0.0 {
        return None;
    }
    let k = k as u64;
    if k == 0 {
        return irreducible_blocks(m).is_empty().then_some(0);
    }
    let t = BigRational::new(1.into(), k.into());
    (scaled_radius_cmp_exact(m, &t) == Ordering::Equal).then_some(k)
}
