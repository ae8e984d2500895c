use cliffield_core::ga::blade_grade;
use cliffield_core::{Algebra, Multivector};
use proptest::prelude::*;

fn close(a: &Multivector, b: &Multivector, scale: f64) -> bool {
    (a - b).max_abs() <= 1e-10 * scale.max(1.0)
}

fn mv(n: usize) -> impl Strategy<Value = Multivector> {
    let alg = Algebra::new(n).unwrap();
    prop::collection::vec(-2.0..2.0f64, 1 << n).prop_map(move |c| Multivector::from_coeffs(alg, c).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Multivector> {
    let alg = Algebra::new(n).unwrap();
    prop::collection::vec(-2.0..2.0f64, n).prop_map(move |c| Multivector::vector(alg, &c).unwrap())
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    (2usize..=6).prop_flat_map(|n| (mv(n), mv(n), mv(n)))
}

fn scale(xs: &[&Multivector]) -> f64 {
    xs.iter().map(|x| x.magnitude()).product()
}

proptest! {
    #[test]
    fn geometric_product_is_associative((a, b, c) in triple()) {
        let lhs = a.gp(&b).gp(&c);
        let rhs = a.gp(&b.gp(&c));
        prop_assert!(close(&lhs, &rhs, scale(&[&a, &b, &c])));
    }

    #[test]
    fn outer_product_is_associative((a, b, c) in triple()) {
        let lhs = a.outer(&b).outer(&c);
        let rhs = a.outer(&b.outer(&c));
        prop_assert!(close(&lhs, &rhs, scale(&[&a, &b, &c])));
    }

    #[test]
    fn reversion_is_an_anti_automorphism((a, b, _c) in triple()) {
        let lhs = a.gp(&b).reverse();
        let rhs = b.reverse().gp(&a.reverse());
        prop_assert!(close(&lhs, &rhs, scale(&[&a, &b])));
        prop_assert!(close(&a.reverse().reverse(), &a, a.magnitude()));
    }

    #[test]
    fn products_of_homogeneous_parts_obey_grade_rules(
        (a, b, _c) in triple(),
        r in 0usize..=6,
        s in 0usize..=6,
    ) {
        let ar = a.grade(r);
        let bs = b.grade(s);
        let prod = ar.gp(&bs);
        for (blade, c) in prod.terms() {
            let k = blade_grade(blade);
            let allowed = k >= r.abs_diff(s) && k <= r + s && (r + s - k) % 2 == 0;
            prop_assert!(allowed || c.abs() < 1e-12, "grade {k} from {r}x{s}");
        }
        let outer = ar.outer(&bs);
        prop_assert!(close(&outer, &prod.grade(r + s), scale(&[&ar, &bs])));
        if r > 0 && s > 0 {
            let inner = ar.inner(&bs);
            prop_assert!(close(&inner, &prod.grade(r.abs_diff(s)), scale(&[&ar, &bs])));
        }
    }

    #[test]
    fn vector_inner_product_expands_over_wedge(
        (a, b, m) in (2usize..=6).prop_flat_map(|n| (vector(n), vector(n), mv(n)))
    ) {
        // a·(b∧A) = (a·b) A − b∧(a·A)
        let lhs = a.inner(&b.outer(&m));
        let rhs = &(&m * a.dot(&b)) - &b.outer(&a.inner(&m));
        prop_assert!(close(&lhs, &rhs, scale(&[&a, &b, &m])));
    }

    #[test]
    fn vector_product_splits_into_inner_and_outer(
        (a, m) in (2usize..=6).prop_flat_map(|n| (vector(n), mv(n)))
    ) {
        let m = m.grades(cliffield_core::GradeSet::from_grades(&[1, 2, 3, 4, 5, 6]));
        let lhs = a.gp(&m);
        let rhs = &a.inner(&m) + &a.outer(&m);
        prop_assert!(close(&lhs, &rhs, scale(&[&a, &m])));
    }
}
