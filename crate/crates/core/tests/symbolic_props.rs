mod common;

use common::q;
use kmsgraph::field::Field;
use kmsgraph::symbolic::{rf_arith, rf_equal, rf_eval, ArithOp, Polynomial2, RationalFunction2};
use num_rational::BigRational;
use proptest::prelude::*;

fn poly(terms: &[(i64, u32, u32)]) -> Polynomial2 {
    terms.iter().fold(Polynomial2::zero(), |acc, &(c, e1, e2)| {
        &acc + &Polynomial2::monomial(q(c, 1), e1, e2)
    })
}

fn terms() -> impl Strategy<Value = Vec<(i64, u32, u32)>> {
    prop::collection::vec((-4i64..=4, 0u32..3, 0u32..3), 0..4)
}

/// Rational functions whose denominators are `1 + (positive polynomial)`,
/// hence nonzero on the positive quadrant and never the zero polynomial.
fn rational_function() -> impl Strategy<Value = RationalFunction2> {
    (terms(), prop::collection::vec((1i64..=3, 0u32..3, 0u32..3), 0..3)).prop_map(|(n, d)| {
        let den = &Polynomial2::one() + &poly(&d);
        RationalFunction2::new(poly(&n), den).expect("denominator is nonzero")
    })
}

fn point() -> impl Strategy<Value = (BigRational, BigRational)> {
    ((1i64..=9, 1i64..=9), (1i64..=9, 1i64..=9)).prop_map(|((a, b), (c, d))| (q(a, b), q(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(f in rational_function(), g in rational_function(), h in rational_function()) {
        let zero = RationalFunction2::zero();
        let one = RationalFunction2::one();
        prop_assert!(rf_equal(&(f.clone() + g.clone()), &(g.clone() + f.clone())));
        prop_assert!(rf_equal(&(f.clone() * g.clone()), &(g.clone() * f.clone())));
        prop_assert!(rf_equal(
            &((f.clone() + g.clone()) + h.clone()),
            &(f.clone() + (g.clone() + h.clone()))
        ));
        prop_assert!(rf_equal(
            &((f.clone() * g.clone()) * h.clone()),
            &(f.clone() * (g.clone() * h.clone()))
        ));
        prop_assert!(rf_equal(
            &(f.clone() * (g.clone() + h.clone())),
            &(f.clone() * g.clone() + f.clone() * h.clone())
        ));
        prop_assert!(rf_equal(&(f.clone() + zero.clone()), &f));
        prop_assert!(rf_equal(&(f.clone() * one.clone()), &f));
        prop_assert!(rf_equal(&(f.clone() - f.clone()), &zero));
        if !Field::is_zero(&g) {
            let back = rf_arith(ArithOp::Mul, &rf_arith(ArithOp::Div, &f, &g).unwrap(), &g).unwrap();
            prop_assert!(rf_equal(&back, &f));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism(
        f in rational_function(),
        g in rational_function(),
        (x1, x2) in point(),
    ) {
        let fv = rf_eval(&f, &x1, &x2).unwrap();
        let gv = rf_eval(&g, &x1, &x2).unwrap();
        prop_assert_eq!(rf_eval(&(f.clone() + g.clone()), &x1, &x2).unwrap(), &fv + &gv);
        prop_assert_eq!(rf_eval(&(f.clone() - g.clone()), &x1, &x2).unwrap(), &fv - &gv);
        prop_assert_eq!(rf_eval(&(f.clone() * g.clone()), &x1, &x2).unwrap(), &fv * &gv);
        // the numerator of g may vanish at this point even though g is not zero
        if !Field::is_zero(&g) && gv != q(0, 1) {
            let quotient = rf_arith(ArithOp::Div, &f, &g).unwrap();
            prop_assert_eq!(rf_eval(&quotient, &x1, &x2).unwrap(), &fv / &gv);
        }
    }

    #[test]
    fn polynomial_evaluation_matches_term_sum(t in terms(), (x1, x2) in point()) {
        let p = poly(&t);
        let direct = t.iter().fold(q(0, 1), |acc, &(c, e1, e2)| {
            acc + q(c, 1) * Field::pow(&x1, e1) * Field::pow(&x2, e2)
        });
        prop_assert_eq!(p.eval(&x1, &x2), direct);
    }
}
