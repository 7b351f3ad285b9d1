//! Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//!
//! Built with `harness = false` so the table is printed on every run.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{constrained_params, q, random_valid_skeleton, random_weights, to_f64};
use kmsgraph::builtins;
use kmsgraph::exhaustive::{ck_evaluate, ck_expand, EdgeClassSet};
use kmsgraph::families::{detect_family, FamilyKind};
use kmsgraph::graph::{Color, TwoGraphSkeleton, VertexSubset};
use kmsgraph::identities::IdentityRegistry;
use kmsgraph::kms::{
    classify_kms, critical_beta, rationally_independent, sink_state, vanishing_deduction, y_bruteforce,
    y_closed, DeductionVerdict, Dynamics, ExtremeKind, Rate, WeightPoint,
};
use num_rational::BigRational;
use rand::rngs::StdRng;
use rand::SeedableRng;

/// Relative agreement required between the closed form and the series.
const ORACLE_REL_TOL: f64 = 1e-9;
const SERIES_CAP: u32 = 60;
const RANDOM_SKELETONS: usize = 50;
const MAX_RATIO: f64 = 0.9;
const CRITICAL_LEVEL_TARGET: f64 = 0.72;
const CRITICAL_LEVEL_TOL: f64 = 0.01;
const RANDOM_PARAMETER_SETS: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, what: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {elapsed:?}, limit {limit:?}"),
    )
}

fn exact_weights(d: &Dynamics) -> Result<[BigRational; 2], String> {
    match d.weight_point() {
        WeightPoint::Exact(x) => Ok(x.clone()),
        WeightPoint::Approx(_) => Err("weight point is not exact".into()),
    }
}

fn headline_state() -> Outcome {
    let start = Instant::now();
    let g = builtins::paper_four_vertex();
    let d = Dynamics::from_rates([Rate::Log(8), Rate::Log(13)], q(1, 1)).map_err(|e| e.to_string())?;
    let x = exact_weights(&d)?;
    let c = classify_kms(&g, &x).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let sink = c
        .extremes
        .iter()
        .find(|e| matches!(e.kind, ExtremeKind::CriticalSink { .. }))
        .ok_or("no critical-sink extreme point")?;
    let expected: Vec<BigRational> = [3, 1, 12, 8].iter().map(|&n| q(n, 24)).collect();
    ensure(sink.values == expected, format!("got {:?}", sink.values))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("(3, 1, 12, 8)/24 exactly in {elapsed:?}"))
}

fn relative_gap(closed: &[f64], series: &[f64]) -> f64 {
    closed
        .iter()
        .zip(series)
        .map(|(c, s)| (c - s).abs() / c.abs())
        .fold(0.0, f64::max)
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let builtin_points = [
        (builtins::paper_two_vertex(), [q(1, 8), q(1, 12)]),
        (builtins::paper_three_vertex(), [q(1, 8), q(1, 12)]),
        (builtins::paper_four_vertex(), [q(1, 16), q(1, 24)]),
    ];
    let mut builtin_worst = 0.0f64;
    for (g, x) in &builtin_points {
        let xf = to_f64(x);
        let closed = y_closed(g, &xf).map_err(|e| e.to_string())?;
        let series = y_bruteforce(g, xf, SERIES_CAP).map_err(|e| e.to_string())?;
        builtin_worst = builtin_worst.max(relative_gap(&closed, &series.y));
    }

    let mut rng = StdRng::seed_from_u64(0x6b6d73);
    let mut failures = 0;
    let mut random_worst = 0.0f64;
    for _ in 0..RANDOM_SKELETONS {
        let g = random_valid_skeleton(&mut rng);
        let xf = to_f64(&random_weights(&mut rng, &g, MAX_RATIO));
        let closed = y_closed(&g, &xf).map_err(|e| e.to_string())?;
        let series = y_bruteforce(&g, xf, SERIES_CAP).map_err(|e| e.to_string())?;
        let gap = relative_gap(&closed, &series.y);
        random_worst = random_worst.max(gap);
        if gap > ORACLE_REL_TOL {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    let summary = format!(
        "builtins worst {builtin_worst:.1e}; random {}/{RANDOM_SKELETONS} within {ORACLE_REL_TOL:e} \
         (worst {random_worst:.1e}); {elapsed:?}",
        RANDOM_SKELETONS - failures
    );
    ensure(builtin_worst <= ORACLE_REL_TOL && failures == 0, summary.clone())?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(summary)
}

fn extreme_values(g: &TwoGraphSkeleton, x: &[BigRational; 2]) -> Result<Vec<Vec<BigRational>>, String> {
    let c = classify_kms(g, x).map_err(|e| e.to_string())?;
    Ok(c.extremes.into_iter().map(|e| e.values).collect())
}

fn extreme_state_table() -> Outcome {
    let x = [q(1, 8), q(1, 12)];
    let two = extreme_values(&builtins::paper_two_vertex(), &x)?;
    ensure(
        two == vec![vec![q(1, 1), q(0, 1)], vec![q(5, 6), q(1, 6)]],
        format!("two-vertex extremes {two:?}"),
    )?;
    let three = extreme_values(&builtins::paper_three_vertex(), &x)?;
    let w = vec![q(7, 20), q(1, 20), q(3, 5)];
    ensure(three.get(2) == Some(&w), format!("three-vertex m(eps_w) {:?}", three.get(2)))?;
    for state in two.iter().chain(&three) {
        let total = state.iter().fold(q(0, 1), |a, v| a + v.clone());
        ensure(total == q(1, 1), format!("state {state:?} sums to {total}"))?;
    }
    Ok("m(eps_u) = (1, 0), m(eps_v) = (5/6, 1/6), m(eps_w) = (7/20, 1/20, 3/5); all sum to 1".into())
}

fn factorization_checks() -> Outcome {
    let x = [q(1, 8), q(1, 12)];
    let g2 = builtins::paper_two_vertex();
    let u_relation = ck_expand(&g2, &EdgeClassSet::all_edges(&g2, 0)).map_err(|e| e.to_string())?;
    let at_u = ck_evaluate(&u_relation, &[q(5, 6), q(1, 6)], &x);
    ensure(at_u == q(0, 1), format!("u-relation gives {at_u}"))?;

    let g3 = builtins::paper_three_vertex();
    let v_relation =
        ck_expand(&g3, &EdgeClassSet::color_edges(&g3, 1, Color::Red)).map_err(|e| e.to_string())?;
    let at_v = ck_evaluate(&v_relation, &[q(5, 6), q(1, 6), q(0, 1)], &x);
    ensure(at_v == q(1, 6), format!("v-relation gives {at_v}"))?;
    Ok("u-relation = 0, v-relation on the lift = 1/6".into())
}

fn vanishing_deductions() -> Outcome {
    let g2 = builtins::paper_two_vertex();
    let d = Dynamics::from_rates([Rate::Log(2), Rate::Log(100)], q(1, 1)).map_err(|e| e.to_string())?;
    let x = exact_weights(&d)?;
    let deduction =
        vanishing_deduction(&g2, &x, &EdgeClassSet::all_edges(&g2, 0)).map_err(|e| e.to_string())?;
    ensure(
        deduction.coefficients[1] == q(-3, 1),
        format!("c_v = {}", deduction.coefficients[1]),
    )?;
    ensure(
        deduction.verdict == DeductionVerdict::Forced(VertexSubset::from([1])),
        format!("verdict {:?}", deduction.verdict),
    )?;

    let g3 = builtins::paper_three_vertex();
    for x in [[q(1, 8), q(1, 6)], [q(1, 2), q(1, 12)]] {
        let c = classify_kms(&g3, &x).map_err(|e| e.to_string())?;
        let forces_w = c
            .deductions
            .iter()
            .any(|d| matches!(&d.verdict, DeductionVerdict::Forced(s) if s.contains(&2)));
        ensure(forces_w, format!("no deduction forces w at {x:?}"))?;
        ensure(
            c.extremes.iter().all(|e| e.values[2] == q(0, 1)),
            format!("a state is nonzero on w at {x:?}"),
        )?;
    }
    Ok("c_v = -3 forces {v}; phi(t_w) = 0 forced at both critical points".into())
}

fn subcritical_pruning() -> Outcome {
    let g = builtins::paper_four_vertex();
    let d = Dynamics::from_rates([Rate::Log(8), Rate::Log(13)], q(9, 10)).map_err(|e| e.to_string())?;
    let x = d.weight_point().to_f64();
    let c = classify_kms(&g, &x).map_err(|e| e.to_string())?;
    let first = c.steps.first().ok_or("no quotient step")?;
    ensure(first.removed == VertexSubset::from([3]), format!("removed {:?}", first.removed))?;
    ensure(
        c.extremes.iter().all(|e| e.values[3] == 0.0),
        "a state is nonzero on x",
    )?;
    ensure(c.dimension() == Some(2), format!("dimension {:?}", c.dimension()))?;
    Ok("phi(t_x) = 0 forced; 2-dimensional simplex on the quotient".into())
}

fn critical_levels() -> Outcome {
    let g = builtins::paper_four_vertex();
    let symbolic = critical_beta(&g, [Some(Rate::Log(8)), None]);
    let u = symbolic
        .components
        .iter()
        .find(|c| c.vertices == vec![0])
        .ok_or("no component {u}")?;
    ensure(
        u.expression == "max{1/3, ln(6)/r2}",
        format!("expression {}", u.expression),
    )?;
    let numeric = critical_beta(&g, [Some(Rate::Log(8)), Some(Rate::Log(12))]);
    let value = numeric
        .components
        .iter()
        .find(|c| c.vertices == vec![0])
        .and_then(|c| c.value)
        .ok_or("no value for {u}")?;
    let gap = (value - CRITICAL_LEVEL_TARGET).abs();
    ensure(gap < CRITICAL_LEVEL_TOL, format!("ln6/ln12 = {value}"))?;
    Ok(format!("{}; at r2 = ln 12 it is {value:.4} (|gap| {gap:.4})", u.expression))
}

fn identity_outcomes(g: &TwoGraphSkeleton) -> Result<Vec<(String, bool)>, String> {
    let (_, results) = IdentityRegistry::standard().run(g).map_err(|e| e.to_string())?;
    Ok(results.into_iter().map(|r| (r.name.clone(), r.passed())).collect())
}

fn outcome_of(outcomes: &[(String, bool)], name: &str) -> Result<bool, String> {
    outcomes
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, ok)| *ok)
        .ok_or_else(|| format!("identity {name} did not run"))
}

fn symbolic_identities() -> Outcome {
    let mut rng = StdRng::seed_from_u64(20);
    let mut seen = BTreeSet::new();
    for _ in 0..RANDOM_PARAMETER_SETS {
        let seed = [(); 8].map(|_| rand::Rng::gen_range(&mut rng, 0..64));
        let params = constrained_params(FamilyKind::ThreeVertex, seed);
        seen.insert((params.d, params.a, params.b));
        ensure(
            params.relations(FamilyKind::ThreeVertex).iter().all(|(_, ok)| *ok),
            format!("generated parameters {params:?} violate a constraint"),
        )?;
        let outcomes = identity_outcomes(&params.skeleton(FamilyKind::ThreeVertex))?;
        for name in ["yv-two-forms", "yw-two-forms", "inverse-3x3"] {
            ensure(outcome_of(&outcomes, name)?, format!("{name} fails on {params:?}"))?;
        }

        let mut broken = params;
        broken.a[1] += 1;
        let outcomes = identity_outcomes(&broken.skeleton(FamilyKind::ThreeVertex))?;
        ensure(
            !outcome_of(&outcomes, "yv-two-forms")?,
            format!("yv-two-forms survives a1 d2 != a2 d1 at {broken:?}"),
        )?;
        let mut broken = params;
        broken.b[1] += 1;
        let outcomes = identity_outcomes(&broken.skeleton(FamilyKind::ThreeVertex))?;
        ensure(
            !outcome_of(&outcomes, "yw-two-forms")?,
            format!("yw-two-forms survives a1 b2 != d2 b1 at {broken:?}"),
        )?;
    }
    let builtin = identity_outcomes(&builtins::paper_three_vertex())?;
    ensure(outcome_of(&builtin, "inverse-3x3")?, "inverse-3x3 fails on the builtin")?;
    Ok(format!(
        "{RANDOM_PARAMETER_SETS} constrained sets ({} distinct) pass; each breaks under its violated constraint",
        seen.len()
    ))
}

fn color_symmetry() -> Outcome {
    let g = builtins::paper_four_vertex();
    let expected = vec![q(3, 8), q(1, 8), q(3, 2)];
    let family = detect_family(&g).ok_or("four-vertex builtin not recognised")?;
    for color in Color::ALL {
        let solve = family.block_solve(color).ok_or(format!("{color} solve failed"))?;
        ensure(solve == expected, format!("{color} solve gives {solve:?}"))?;
    }
    let sink = sink_state(&g, 3).map_err(|e| e.to_string())?;
    ensure(
        sink.solves.len() == 2 && sink.solves.iter().all(|(_, s)| *s == expected),
        format!("sink solves {:?}", sink.solves),
    )?;
    Ok("both colours give (3/8, 1/8, 3/2)".into())
}

/// `d1, d2` are powers of a common base, searched directly.
fn common_power(d1: u64, d2: u64) -> bool {
    (2u64..=100).any(|m| {
        let powers: Vec<u64> = (1..=20u32).map_while(|e| m.checked_pow(e)).collect();
        powers.contains(&d1) && powers.contains(&d2)
    })
}

fn rational_independence() -> Outcome {
    let spot = [((2, 6), true), ((2, 8), false), ((4, 8), false)];
    for ((a, b), independent) in spot {
        let got = rationally_independent(a, b).map_err(|e| e.to_string())?;
        ensure(got == independent, format!("({a}, {b}) reported independent = {got}"))?;
    }
    let mut pairs = 0;
    for d1 in 2..=100u64 {
        for d2 in 2..=100u64 {
            let got = rationally_independent(d1, d2).map_err(|e| e.to_string())?;
            ensure(got == !common_power(d1, d2), format!("({d1}, {d2}) disagrees with the oracle"))?;
            if d1 == d2 {
                ensure(!got, format!("({d1}, {d1}) reported independent"))?;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs agree with the power-search oracle"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("headline critical state", headline_state),
        ("closed form vs series oracle", oracle_equivalence),
        ("extreme-state table", extreme_state_table),
        ("factorization checks", factorization_checks),
        ("vanishing deductions", vanishing_deductions),
        ("sub-critical pruning", subcritical_pruning),
        ("critical levels", critical_levels),
        ("symbolic identity suite", symbolic_identities),
        ("colour symmetry of the sink solve", color_symmetry),
        ("rational independence", rational_independence),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
