//! Generators shared by the integration tests.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use kmsgraph::families::{FamilyKind, FamilyParams};
use kmsgraph::graph::spectral::matrix_spectral_radius;
use kmsgraph::graph::{Color, TwoGraphSkeleton};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// `A1` from `entries` (row-major, zero-padded) and `A2 = c0 + c1 A1 + c2 A1^2`,
/// which always commute.
pub fn polynomial_pair(n: usize, entries: &[i64], coeffs: [i64; 3]) -> TwoGraphSkeleton {
    let a1: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| entries.get(i * n + j).copied().unwrap_or(0)).collect())
        .collect();
    let sq = mat_mul(&a1, &a1);
    let a2 = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| coeffs[0] * i64::from(i == j) + coeffs[1] * a1[i][j] + coeffs[2] * sq[i][j])
                .collect()
        })
        .collect();
    TwoGraphSkeleton::new(names(n), a1, a2).expect("square matrices")
}

/// Parameters for a family member that satisfy every commutation constraint.
/// `seed` supplies small positive integers.
pub fn constrained_params(kind: FamilyKind, seed: [i64; 8]) -> FamilyParams {
    let [d1, d2, i, j, f1, f2, l, _] = seed.map(|s| s.rem_euclid(4) + 1);
    let g = gcd(d1, d2);
    let a = [i * d1 / g, i * d2 / g];
    let h = gcd(a[0], d2);
    let mut b = [j * a[0] / h, j * d2 / h];
    let mut p = FamilyParams {
        d: [d1, d2],
        a,
        ..FamilyParams::default()
    };
    if kind == FamilyKind::FourVertex {
        let k = gcd(f1, f2);
        let c = [l * f1 / k, l * f2 / k];
        if b[1] * c[0] % f2 != 0 {
            b = [b[0] * f2, b[1] * f2];
        }
        p.c = c;
        p.f = [f1, f2];
        p.g1 = b[1] * c[0] / f2;
    }
    if kind != FamilyKind::TwoVertex {
        p.b = b;
    }
    p
}

/// A random valid skeleton on at most four vertices.
pub fn random_valid_skeleton<R: Rng>(rng: &mut R) -> TwoGraphSkeleton {
    loop {
        let g = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=4);
            let entries: Vec<i64> = (0..n * n)
                .map(|_| if rng.gen_bool(0.4) { rng.gen_range(1..=2) } else { 0 })
                .collect();
            let coeffs = [rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=1)];
            polynomial_pair(n, &entries, coeffs)
        } else {
            let kind = [FamilyKind::TwoVertex, FamilyKind::ThreeVertex, FamilyKind::FourVertex]
                [rng.gen_range(0..3)];
            let seed = [(); 8].map(|_| rng.gen_range(0..4));
            constrained_params(kind, seed).skeleton(kind)
        };
        if g.is_valid() {
            return g;
        }
    }
}

/// An exact weight point with `x_i rho(A_i)` at most `max_ratio`, drawn with
/// `x_i rho(A_i)` roughly uniform on `[0.1, max_ratio]`.
pub fn random_weights<R: Rng>(
    rng: &mut R,
    g: &TwoGraphSkeleton,
    max_ratio: f64,
) -> [BigRational; 2] {
    Color::ALL.map(|c| {
        let rho = matrix_spectral_radius(g.matrix(c));
        let s: f64 = rng.gen_range(0.1..=max_ratio);
        let target = if rho > 0.0 { (s / rho).min(1.0) } else { s };
        let p = ((target * 1000.0).floor() as i64).max(1);
        q(p, 1000)
    })
}

pub fn to_f64(x: &[BigRational; 2]) -> [f64; 2] {
    x.clone().map(|v| kmsgraph::field::rational_to_f64(&v))
}
