use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use zgraded::expr::{parse_expr, Expr};
use zgraded::scalar::{rational, rational_to_real};
use zgraded::{Algebra, Degree, ExactElement, Monomial, NumericElement, Rational};

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0usize..3).prop_map(Expr::coord),
        (-4i64..5).prop_map(Expr::int),
        (-4i64..5, 1i64..4).prop_map(|(n, d)| Expr::rational(n, d)),
    ]
}

/// Expressions that are smooth and finite on `[-1, 1]^3`.
fn expr() -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            (inner.clone(), 0i32..4).prop_map(|(a, k)| a.pow(k)),
            inner.clone().prop_map(Expr::sin),
            inner.clone().prop_map(Expr::cos),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a / (Expr::int(2) + b.clone() * b)),
        ]
    })
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-1.0f64..1.0, 3)
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * (1.0 + a.abs().max(b.abs()))
}

fn no_params() -> BTreeMap<String, f64> {
    BTreeMap::new()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn simplify_preserves_values(e in expr(), p in point()) {
        let a = e.eval(&p, &no_params()).unwrap();
        let b = e.simplify().eval(&p, &no_params()).unwrap();
        prop_assert!(close(a, b, 1e-9), "{a} vs {b}");
    }

    #[test]
    fn printing_then_parsing_preserves_values(e in expr(), p in point()) {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = e.to_text(&names);
        let back = parse_expr(&text, &["x", "y", "z"], &[]).unwrap();
        let (a, b) = (e.eval(&p, &no_params()).unwrap(), back.eval(&p, &no_params()).unwrap());
        prop_assert!(close(a, b, 1e-9), "{text}: {a} vs {b}");
    }

    #[test]
    fn mixed_partials_commute(e in expr(), p in point(), i in 0usize..3, j in 0usize..3) {
        let a = e.diff(i).diff(j).eval(&p, &no_params()).unwrap();
        let b = e.diff(j).diff(i).eval(&p, &no_params()).unwrap();
        prop_assert!(close(a, b, 1e-8), "{a} vs {b}");
    }

    #[test]
    fn derivative_matches_central_difference(e in expr(), p in point(), i in 0usize..3) {
        let h = 1e-5;
        let (mut up, mut down) = (p.clone(), p.clone());
        up[i] += h;
        down[i] -= h;
        let f = |x: &[f64]| e.eval(x, &no_params()).unwrap();
        let fd = (f(&up) - f(&down)) / (2.0 * h);
        let exact = e.diff(i).eval(&p, &no_params()).unwrap();
        // third derivatives of these expressions stay moderate on the box
        prop_assert!((fd - exact).abs() <= 1e-4 * (1.0 + exact.abs()), "{fd} vs {exact}");
    }

    #[test]
    fn koszul_sign_is_symmetric_and_bilinear(a in proptest::collection::vec(0u8..2, 5), b in proptest::collection::vec(0u8..2, 5), c in proptest::collection::vec(0u8..2, 5)) {
        let (a, b, c) = (Degree::new(&a).unwrap(), Degree::new(&b).unwrap(), Degree::new(&c).unwrap());
        prop_assert_eq!(a.koszul_sign(&b).unwrap(), b.koszul_sign(&a).unwrap());
        let ab = a.add(&b).unwrap();
        prop_assert_eq!(ab.koszul_sign(&c).unwrap(), a.koszul_sign(&c).unwrap() * b.koszul_sign(&c).unwrap());
    }
}

fn exact_algebra() -> (Arc<Algebra>, Vec<Monomial>) {
    let alg = Algebra::bi_form(3);
    let mut monomials = Vec::new();
    for p in 0..=3 {
        for q in 0..=3 {
            monomials.extend(alg.monomials_with_totals(&[p, q]));
        }
    }
    (alg, monomials)
}

fn element() -> impl Strategy<Value = Vec<(usize, i64, i64)>> {
    proptest::collection::vec((0usize..64, -9i64..10, 1i64..5), 0..6)
}

fn build(alg: &Arc<Algebra>, monomials: &[Monomial], spec: &[(usize, i64, i64)]) -> ExactElement {
    ExactElement::from_terms(
        alg,
        spec.iter()
            .map(|&(i, n, d)| (monomials[i].clone(), rational(n, d))),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_ring_laws(a in element(), b in element(), c in element()) {
        let (alg, ms) = exact_algebra();
        let (a, b, c) = (build(&alg, &ms, &a), build(&alg, &ms, &b), build(&alg, &ms, &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn homogeneous_parts_graded_commute(a in element(), b in element(), ta in (0u32..3, 0u32..3), tb in (0u32..3, 0u32..3)) {
        let (alg, ms) = exact_algebra();
        let a = build(&alg, &ms, &a).part(&[ta.0, ta.1]);
        let b = build(&alg, &ms, &b).part(&[tb.0, tb.1]);
        let da = Degree::new(&[(ta.1 % 2) as u8, (ta.0 % 2) as u8]).unwrap();
        let db = Degree::new(&[(tb.1 % 2) as u8, (tb.0 % 2) as u8]).unwrap();
        let s = da.koszul_sign(&db).unwrap() as i64;
        prop_assert_eq!(&a * &b, (&b * &a).scale_int(s));
    }

    #[test]
    fn exact_and_floating_products_agree(a in element(), b in element()) {
        let (alg, ms) = exact_algebra();
        let (a, b) = (build(&alg, &ms, &a), build(&alg, &ms, &b));
        let to_f64 = |x: &ExactElement| -> NumericElement {
            x.try_map_coeffs::<f64, (), _>(|q: &Rational| Ok(rational_to_real(q))).unwrap()
        };
        let exact = to_f64(&(&a * &b));
        let float = &to_f64(&a) * &to_f64(&b);
        prop_assert!((&exact - &float).max_abs() < 1e-9);
    }
}
