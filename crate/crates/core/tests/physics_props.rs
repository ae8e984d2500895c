use cliffield_core::dynamics::{solve_scalar_field, FieldGrid, SolveOptions};
use cliffield_core::hamiltonian::{Orientation, Potential, ScalarFieldModel, SpacetimeSplit, StringModel};
use cliffield_core::hj::{momentum_curl, FnSolution};
use cliffield_core::noether::{symmetry_defect, NoetherCharge};
use cliffield_core::transforms::{Affine, AxisScaling, FnField, VectorField};
use cliffield_core::{Algebra, Multivector};
use proptest::prelude::*;

fn alg3() -> Algebra {
    Algebra::new(3).unwrap()
}

fn vec3() -> impl Strategy<Value = Multivector> {
    prop::array::uniform3(-2.0..2.0f64).prop_map(|c| Multivector::vector(alg3(), &c).unwrap())
}

fn biv3() -> impl Strategy<Value = Multivector> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_map(|c| Multivector::from_terms(alg3(), &[(0b011, c[0]), (0b101, c[1]), (0b110, c[2])]))
}

proptest! {
    #[test]
    fn string_defect_vanishes_for_rigid_motions(q in vec3(), p in vec3(), b in biv3(), v0 in vec3()) {
        let m = StringModel::new(alg3(), 1, 1.3).unwrap();
        let d = symmetry_defect(&m, &Affine::new(b, v0, "rigid"), &q, &p).unwrap();
        prop_assert!(d.abs() < 1e-8);
    }

    #[test]
    fn string_defect_detects_scaling(q in vec3(), p in vec3(), axis in 0usize..3) {
        let m = StringModel::new(alg3(), 1, 1.3).unwrap();
        let d = symmetry_defect(&m, &AxisScaling::new(axis), &q, &p).unwrap();
        // v = q_axis e_axis gives defect −P_axis²
        let expected = -p.vector_part()[axis].powi(2);
        prop_assert!((d - expected).abs() < 1e-6 * (1.0 + expected.abs()));
    }

    #[test]
    fn defect_is_linear(q in vec3(), p in vec3(), b in biv3(), alpha in -2.0..2.0f64, beta in -2.0..2.0f64) {
        let m = StringModel::new(alg3(), 1, 1.0).unwrap();
        let rot = Affine::rotation(b.clone());
        let combo = FnField::new(
            move |x: &Multivector| &(&AxisScaling::new(2).eval(x) * alpha) + &(&Affine::rotation(b.clone()).eval(x) * beta),
            "combo",
        );
        let lhs = symmetry_defect(&m, &combo, &q, &p).unwrap();
        let rhs = alpha * symmetry_defect(&m, &AxisScaling::new(2), &q, &p).unwrap()
            + beta * symmetry_defect(&m, &rot, &q, &p).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-7 * (1.0 + rhs.abs()));
    }

    #[test]
    fn on_shell_charge_is_tension_times_tangent(u in vec3(), q in vec3(), b in biv3(), v0 in vec3()) {
        prop_assume!(u.magnitude() > 1e-3);
        let tension = 1.7;
        let dir = u.normalized().unwrap();
        let p = &dir * tension;
        let v = Affine::new(b, v0, "rigid");
        let charge = NoetherCharge::new(&p, &v, &q);
        let expected = tension * dir.dot(&v.eval(&q));
        prop_assert!((charge.value.scalar_part() - expected).abs() < 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn curl_of_a_gradient_vanishes(q in vec3(), c in prop::array::uniform6(-1.0..1.0f64)) {
        let s = FnSolution::new(
            alg3(),
            0,
            move |x: &Multivector| {
                let v = x.vector_part();
                let val = c[0] * v[0] * v[1] + c[1] * v[2] * v[2] + c[2] * libm::sin(v[0] + c[3] * v[2])
                    + c[4] * v[1] * v[1] * v[1] + c[5] * v[0];
                Multivector::scalar(x.algebra(), val)
            },
            "poly",
        );
        prop_assert!(momentum_curl(&s, &q).unwrap() < 1e-4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn harmonic_solutions_obey_the_maximum_principle(values in prop::collection::vec(-3.0..3.0f64, 81)) {
        let split = SpacetimeSplit::new(2, 1, Orientation::Positive).unwrap();
        let m = ScalarFieldModel::new(split, Potential::Zero).unwrap();
        let mut g = FieldGrid::unit(split, 8).unwrap();
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..g.node_count() {
            if g.is_boundary(i) {
                g.set_phi(i, &[values[i]]);
                lo = lo.min(values[i]);
                hi = hi.max(values[i]);
            }
        }
        solve_scalar_field(&mut g, &m, &SolveOptions::default()).unwrap();
        for i in 0..g.node_count() {
            let v = g.phi(i)[0];
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9);
        }
    }
}
