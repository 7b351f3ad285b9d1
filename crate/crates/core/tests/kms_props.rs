mod common;

use common::{q, random_valid_skeleton, random_weights, to_f64};
use kmsgraph::builtins;
use kmsgraph::exhaustive::{ck_evaluate, ck_expand, EdgeClassSet};
use kmsgraph::graph::{Color, TwoGraphSkeleton, VertexSubset};
use kmsgraph::kms::{
    classify_kms, kms_simplex, y_bruteforce, y_closed, DeductionVerdict, ExtremeKind, Regime,
    DEFAULT_SERIES_CAP,
};
use num_rational::BigRational;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn zero() -> BigRational {
    q(0, 1)
}

fn setup(seed: u64, max_ratio: f64) -> (TwoGraphSkeleton, [BigRational; 2]) {
    let mut rng = StdRng::seed_from_u64(seed);
    let g = random_valid_skeleton(&mut rng);
    let x = random_weights(&mut rng, &g, max_ratio);
    (g, x)
}

/// `sum_j A[r][j] v[j]`.
fn apply(g: &TwoGraphSkeleton, color: Color, v: &[BigRational], r: usize) -> BigRational {
    (0..g.vertex_count()).fold(zero(), |acc, j| {
        acc + q(g.edges(color, r, j) as i64, 1) * v[j].clone()
    })
}

fn apply_vec(g: &TwoGraphSkeleton, color: Color, v: &[BigRational]) -> Vec<BigRational> {
    (0..g.vertex_count()).map(|r| apply(g, color, v, r)).collect()
}

#[test]
fn series_agrees_with_closed_form_within_its_tail_bound() {
    for seed in 0..80u64 {
        let (g, x) = setup(seed, 0.9);
        let xf = to_f64(&x);
        let closed: Vec<f64> = y_closed(&g, &xf).unwrap();
        let series = y_bruteforce(&g, xf, DEFAULT_SERIES_CAP).unwrap();
        assert!(series.ratio <= 0.9 + 1e-9, "seed {seed}: ratio {}", series.ratio);
        for (v, (c, s)) in closed.iter().zip(&series.y).enumerate() {
            let gap = (c - s).abs();
            assert!(
                gap <= series.tail_bound[v] + 1e-12 * c,
                "seed {seed} vertex {v}: gap {gap:e} exceeds bound {:e}",
                series.tail_bound[v]
            );
        }
    }
}

#[test]
fn exact_and_float_closed_forms_agree() {
    for seed in 0..40u64 {
        let (g, x) = setup(seed, 0.9);
        let exact = y_closed(&g, &x).unwrap();
        let float = y_closed(&g, &to_f64(&x)).unwrap();
        for (e, f) in exact.iter().zip(&float) {
            let e = kmsgraph::field::rational_to_f64(e);
            assert!((e - f).abs() <= 1e-9 * e, "seed {seed}: {e} vs {f}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn subcritical_simplex_is_normalised_and_subinvariant(seed in any::<u64>()) {
        let (g, x) = setup(seed, 0.9);
        let c = classify_kms(&g, &x).unwrap();
        prop_assert_eq!(c.regime, Regime::AboveCritical);
        prop_assert_eq!(c.dimension(), Some(g.vertex_count() - 1));
        for e in &c.extremes {
            let total = e.values.iter().fold(zero(), |a, v| a + v.clone());
            prop_assert_eq!(total, q(1, 1));
            prop_assert!(e.values.iter().all(|v| *v >= zero()));
            for color in Color::ALL {
                let image = apply_vec(&g, color, &e.values);
                for (m, am) in e.values.iter().zip(&image) {
                    prop_assert!(m.clone() - x[color.index()].clone() * am.clone() >= zero());
                }
            }
        }
    }

    #[test]
    fn quotient_states_are_restrictions_of_lifts(
        seed in any::<u64>(),
        pick in prop::collection::btree_set(0usize..4, 1..3),
    ) {
        let (g, x) = setup(seed, 0.9);
        let seed_set: VertexSubset = pick.into_iter().filter(|&v| v < g.vertex_count()).collect();
        let h = g.hereditary_closure(&seed_set);
        prop_assume!(h.len() < g.vertex_count());
        let keep: Vec<usize> = (0..g.vertex_count()).filter(|v| !h.contains(v)).collect();
        let full = kms_simplex(&g, &x).unwrap();
        let quotient = kms_simplex(&g.quotient(&h).unwrap(), &x).unwrap();
        for (i, &v) in keep.iter().enumerate() {
            let lifted = &full.extremes[v].values;
            for w in &h {
                prop_assert_eq!(&lifted[*w], &zero());
            }
            let restricted: Vec<BigRational> = keep.iter().map(|&k| lifted[k].clone()).collect();
            prop_assert_eq!(&restricted, &quotient.extremes[i].values);
            prop_assert_eq!(&full.y[v], &quotient.y[i]);
        }
    }

    #[test]
    fn relation_expansion_matches_direct_evaluation(
        seed in any::<u64>(),
        raw in prop::collection::vec(0i64..20, 4),
    ) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_valid_skeleton(&mut rng);
        let x = [q(rng.gen_range(1..10), 10), q(rng.gen_range(1..10), 10)];
        let phi: Vec<BigRational> = (0..g.vertex_count()).map(|v| q(raw[v], 7)).collect();
        for u in 0..g.vertex_count() {
            // phi(t_u) - x1 (A1 phi)_u - x2 (A2 phi)_u + x1 x2 (A1 A2 phi)_u
            let a2phi = apply_vec(&g, Color::Red, &phi);
            let direct = phi[u].clone()
                - x[0].clone() * apply(&g, Color::Blue, &phi, u)
                - x[1].clone() * a2phi[u].clone()
                + x[0].clone() * x[1].clone() * apply(&g, Color::Blue, &a2phi, u);
            let set = EdgeClassSet::all_edges(&g, u);
            let expansion = ck_expand(&g, &set).unwrap();
            prop_assert_eq!(ck_evaluate(&expansion, &phi, &x), direct);

            for color in Color::ALL {
                let set = EdgeClassSet::color_edges(&g, u, color);
                let expansion = ck_expand(&g, &set).unwrap();
                let direct = phi[u].clone() - x[color.index()].clone() * apply(&g, color, &phi, u);
                prop_assert_eq!(ck_evaluate(&expansion, &phi, &x), direct);
            }
        }
    }
}

fn forced_sets_vanish(g: &TwoGraphSkeleton, x: &[BigRational; 2]) {
    let c = classify_kms(g, x).unwrap();
    for d in &c.deductions {
        if let DeductionVerdict::Forced(set) = &d.verdict {
            for e in &c.extremes {
                for v in set {
                    assert_eq!(e.values[*v], zero(), "{} at {:?}", e.label, x);
                }
            }
        }
    }
    for step in &c.steps {
        for e in &c.extremes {
            if matches!(e.kind, ExtremeKind::Simplex { .. }) {
                for v in &step.removed {
                    assert_eq!(e.values[*v], zero(), "{} misses removed {v}", e.label);
                }
            }
        }
    }
}

#[test]
fn deductions_agree_with_quotient_states() {
    forced_sets_vanish(&builtins::paper_three_vertex(), &[q(1, 8), q(1, 6)]);
    forced_sets_vanish(&builtins::paper_three_vertex(), &[q(1, 2), q(1, 12)]);
    forced_sets_vanish(&builtins::paper_two_vertex(), &[q(1, 2), q(1, 100)]);
    forced_sets_vanish(&builtins::paper_four_vertex(), &[q(1, 8), q(1, 13)]);
}

#[test]
fn pruned_classification_matches_quotient_classification() {
    let g = builtins::paper_four_vertex();
    let x = [8f64.powf(-0.9), 13f64.powf(-0.9)];
    let full = classify_kms(&g, &x).unwrap();
    let h = VertexSubset::from([3]);
    let quotient = classify_kms(&g.quotient(&h).unwrap(), &x).unwrap();
    assert_eq!(full.extremes.len(), quotient.extremes.len());
    for (a, b) in full.extremes.iter().zip(&quotient.extremes) {
        assert_eq!(a.values[3], 0.0);
        for (va, vb) in a.values[..3].iter().zip(&b.values) {
            assert!((va - vb).abs() < 1e-12);
        }
    }
}

#[test]
fn two_vertex_state_vanishes_where_deduction_says() {
    let g = builtins::paper_two_vertex();
    let c = classify_kms(&g, &[q(1, 2), q(1, 100)]).unwrap();
    assert!(c.extremes.iter().all(|e| e.values[1] == zero()));
}
