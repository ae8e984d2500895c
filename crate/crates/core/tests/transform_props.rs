use cliffield_core::transforms::{lie_flow, rotor_exp, Affine, LinearMap};
use cliffield_core::{Algebra, Multivector};
use proptest::prelude::*;

fn mv(n: usize) -> impl Strategy<Value = Multivector> {
    let alg = Algebra::new(n).unwrap();
    prop::collection::vec(-1.5..1.5f64, 1 << n).prop_map(move |c| Multivector::from_coeffs(alg, c).unwrap())
}

fn vector(n: usize) -> impl Strategy<Value = Multivector> {
    let alg = Algebra::new(n).unwrap();
    prop::collection::vec(-1.5..1.5f64, n).prop_map(move |c| Multivector::vector(alg, &c).unwrap())
}

fn bivector(n: usize) -> impl Strategy<Value = Multivector> {
    mv(n).prop_map(|m| m.grade(2))
}

fn linear_map(n: usize) -> impl Strategy<Value = LinearMap> {
    prop::collection::vec(vector(n), n).prop_map(|imgs| LinearMap::from_vector_images(&imgs).unwrap())
}

fn pairing(a: &Multivector, b: &Multivector) -> f64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y).sum()
}

proptest! {
    #[test]
    fn outermorphism_is_multiplicative_on_wedges(
        (f, a, b) in (2usize..=5).prop_flat_map(|n| (linear_map(n), mv(n), mv(n)))
    ) {
        let lhs = f.outermorphism(&a.outer(&b));
        let rhs = f.outermorphism(&a).outer(&f.outermorphism(&b));
        let scale = 1.0 + lhs.magnitude();
        prop_assert!((&lhs - &rhs).max_abs() < 1e-9 * scale);
    }

    #[test]
    fn adjoint_is_the_transpose(
        (f, a, b) in (2usize..=5).prop_flat_map(|n| (linear_map(n), mv(n), mv(n)))
    ) {
        let lhs = pairing(&f.outermorphism(&a), &b);
        let rhs = pairing(&a, &f.adjoint(&b));
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn rotors_are_unitary_and_preserve_lengths(
        (b, v) in (2usize..=6).prop_flat_map(|n| (bivector(n), vector(n)))
    ) {
        let r = rotor_exp(&b);
        let unit = r.value().gp(&r.value().reverse());
        let one = Multivector::scalar(b.algebra(), 1.0);
        prop_assert!((&unit - &one).max_abs() < 1e-10);
        let rv = r.apply(&v);
        prop_assert_eq!(rv.homogeneous_grade().unwrap_or(1), 1);
        prop_assert!((rv.grade(1).magnitude() - v.magnitude()).abs() < 1e-10);
        prop_assert!((&r.apply_inverse(&rv) - &v).max_abs() < 1e-10);
    }

    #[test]
    fn flows_compose(
        (b, v0, q) in (2usize..=4).prop_flat_map(|n| (bivector(n), vector(n), vector(n))),
        s in -0.8..0.8f64,
        t in -0.8..0.8f64,
    ) {
        let field = Affine::new(b, v0, "affine");
        let two_step = lie_flow(&field, &lie_flow(&field, &q, s, None).unwrap(), t, None).unwrap();
        let one_step = lie_flow(&field, &q, s + t, None).unwrap();
        prop_assert!((&two_step - &one_step).max_abs() < 1e-8);
        let back = lie_flow(&field, &lie_flow(&field, &q, s, None).unwrap(), -s, None).unwrap();
        prop_assert!((&back - &q).max_abs() < 1e-8);
    }
}
