use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dynamics::{integrate_worldline, solve_scalar_field, FieldGrid, SolveOptions};
use crate::hamiltonian::{random_phase_points, Orientation, Potential, ScalarFieldModel, SpacetimeSplit, StringModel};
use crate::transforms::{Affine, AxisScaling, RotorMap, Translation};

fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(11)
}

#[test]
fn string_symmetries_have_zero_defect() {
    let a = Algebra::new(3).unwrap();
    let m = StringModel::new(a, 2, 1.3).unwrap();
    let v0 = Multivector::vector(a, &[0.3, -1.0, 2.0]).unwrap();
    let b0 = Multivector::from_terms(a, &[(0b011, 0.7), (0b101, -0.2), (0b110, 1.1)]);
    for (q, p) in random_phase_points(&m, 20, &mut rng()) {
        assert!(symmetry_defect(&m, &Affine::translation(v0.clone()), &q, &p).unwrap().abs() < 1e-10);
        let rot = Affine::new(b0.clone(), v0.clone(), "rigid");
        assert!(symmetry_defect(&m, &rot, &q, &p).unwrap().abs() < 1e-8);
    }
    let (q, p) = random_phase_points(&m, 1, &mut rng()).remove(0);
    assert!(symmetry_defect(&m, &AxisScaling::new(0), &q, &p).unwrap().abs() > 1e-3);
}

#[test]
fn defect_is_linear_in_the_generator() {
    let a = Algebra::new(3).unwrap();
    let m = StringModel::new(a, 1, 1.0).unwrap();
    let s = AxisScaling::new(1);
    let r = Affine::rotation(Multivector::blade(a, 0b110, 0.4));
    let combo = crate::transforms::FnField::new(
        move |q: &Multivector| &(&AxisScaling::new(1).eval(q) * 2.0) - &(&Affine::rotation(Multivector::blade(q.algebra(), 0b110, 0.4)).eval(q) * 0.5),
        "combo",
    );
    for (q, p) in random_phase_points(&m, 5, &mut rng()) {
        let lhs = symmetry_defect(&m, &combo, &q, &p).unwrap();
        let rhs = 2.0 * symmetry_defect(&m, &s, &q, &p).unwrap() - 0.5 * symmetry_defect(&m, &r, &q, &p).unwrap();
        assert!((lhs - rhs).abs() < 1e-8 * (1.0 + rhs.abs()));
    }
}

#[test]
fn scalar_field_finite_symmetries() {
    let split = SpacetimeSplit::new(2, 2, Orientation::Positive).unwrap();
    let a = split.algebra();
    let m = ScalarFieldModel::new(split, Potential::Mass { m: 1.2 }).unwrap();
    let pts = random_phase_points(&m, 20, &mut rng());
    let shift = Translation::new(split.spacetime_vector(&[0.4, -1.3]));
    assert!(finite_symmetry_check(&m, &shift, &pts).unwrap().max_defect < 1e-10);
    let spin = RotorMap::new(&Multivector::blade(a, 0b0011, 0.7), Multivector::zero(a), "spacetime");
    assert!(finite_symmetry_check(&m, &spin, &pts).unwrap().max_defect < 1e-8);
    let field_spin = RotorMap::new(&Multivector::blade(a, 0b1100, 0.9), Multivector::zero(a), "field");
    assert!(finite_symmetry_check(&m, &field_spin, &pts).unwrap().max_defect < 1e-8);
    let broken = ScalarFieldModel::new(split, Potential::Anisotropic { masses: vec![1.0, 2.0] }).unwrap();
    assert!(finite_symmetry_check(&broken, &field_spin, &pts).unwrap().max_defect > 1e-3);
}

#[test]
fn charges_along_straight_lines() {
    let a = Algebra::new(3).unwrap();
    let m = StringModel::new(a, 1, 2.0).unwrap();
    let dir = Multivector::vector(a, &[0.0, 0.6, 0.8]).unwrap();
    let q0 = Multivector::vector(a, &[1.0, 0.0, -1.0]).unwrap();
    let w = integrate_worldline(&m, &q0, &(&dir * 2.0), 4.0, 0.1).unwrap();
    let v0 = Multivector::vector(a, &[1.0, 2.0, 3.0]).unwrap();
    let trans = charge_along_worldline(&w, &Affine::translation(v0));
    assert_eq!(trans.spread, 0.0);
    let rot = charge_along_worldline(&w, &Affine::rotation(Multivector::from_terms(a, &[(0b011, 1.0), (0b110, -0.5)])));
    assert!(rot.spread < 1e-8);
    assert_eq!(rot.charges[0].value.homogeneous_grade(), Some(0));

    let w0 = integrate_worldline(&m, &q0, &(&dir * 2.0), 0.0, 0.1).unwrap();
    let single = charge_along_worldline(&w0, &Affine::translation(dir.clone()));
    assert_eq!((single.charges.len(), single.spread), (1, 0.0));
}

fn solved(cells: usize, n: usize, v: Potential, orientation: Orientation, bc: impl Fn(&[f64]) -> Vec<f64>) -> (FieldGrid, ScalarFieldModel) {
    let split = SpacetimeSplit::new(2, n, orientation).unwrap();
    let m = ScalarFieldModel::new(split, v).unwrap();
    let mut g = FieldGrid::unit(split, cells).unwrap();
    g.set_boundary(bc);
    solve_scalar_field(&mut g, &m, &SolveOptions::default()).unwrap();
    (g, m)
}

fn bumpy(x: &[f64]) -> Vec<f64> {
    vec![libm::sin(2.0 * x[0]) * libm::cosh(0.5 * x[1]) + x[0] * x[1], 0.3 * x[0] - x[1] * x[1]]
}

#[test]
fn energy_momentum_routes_agree() {
    for orientation in [Orientation::Positive, Orientation::Negative] {
        let (g, m) = solved(16, 2, Potential::Quartic { m: 1.0, g: 0.5 }, orientation, bumpy);
        for v in [[1.0, 0.0], [0.0, 1.0], [0.6, -0.8]] {
            let lag = energy_momentum_current(&g, &m, &v).unwrap();
            let ham = noether_current(&g, &m, &Affine::translation(m.split().spacetime_vector(&v)), lag.generator.clone()).unwrap();
            assert!(lag.max_difference(&ham) < 1e-10, "{orientation:?} {v:?}: {}", lag.max_difference(&ham));
            assert!(ham.field_leak < 1e-12);
        }
    }
}

#[test]
fn three_dimensional_current_routes_agree() {
    let split = SpacetimeSplit::new(3, 1, Orientation::Positive).unwrap();
    let m = ScalarFieldModel::new(split, Potential::Mass { m: 0.5 }).unwrap();
    let mut g = FieldGrid::unit(split, 6).unwrap();
    g.fill(|x| vec![x[0] * x[1] + libm::sin(x[2])]);
    crate::dynamics::recover_momentum(&mut g, &m).unwrap();
    let v = [0.2, -0.4, 1.0];
    let lag = energy_momentum_current(&g, &m, &v).unwrap();
    let ham = noether_current(&g, &m, &Affine::translation(split.spacetime_vector(&v)), lag.generator.clone()).unwrap();
    assert!(lag.max_difference(&ham) < 1e-10, "{}", lag.max_difference(&ham));
}

#[test]
fn linear_field_current_is_constant() {
    let split = SpacetimeSplit::new(2, 1, Orientation::Positive).unwrap();
    let m = ScalarFieldModel::new(split, Potential::Zero).unwrap();
    let mut g = FieldGrid::unit(split, 6).unwrap();
    let k = [0.5, 1.5];
    g.fill(|x| vec![k[0] * x[0] + k[1] * x[1]]);
    let v = [1.0, 2.0];
    let j = energy_momentum_current(&g, &m, &v).unwrap();
    let half_k2 = 0.5 * (k[0] * k[0] + k[1] * k[1]);
    let vk = v[0] * k[0] + v[1] * k[1];
    for val in &j.values {
        for c in 0..2 {
            assert!((val[c] - (-v[c] * half_k2 + vk * k[c])).abs() < 1e-12);
        }
    }
    let res = continuity_residual(&g, &j).unwrap();
    assert!(res.max < 1e-12);
    assert!(patch_flux(&g, &j, &[1, 1], &[5, 4]).unwrap().abs() < 1e-12);
}

#[test]
fn zero_field_zero_current() {
    let split = SpacetimeSplit::new(2, 1, Orientation::Positive).unwrap();
    let m = ScalarFieldModel::new(split, Potential::Zero).unwrap();
    let g = FieldGrid::unit(split, 4).unwrap();
    assert_eq!(energy_momentum_current(&g, &m, &[1.0, 0.0]).unwrap().max_abs(), 0.0);
    let bx = Multivector::zero(split.algebra());
    let r = rotation_currents(&g, &m, &bx, &[0.5, 0.5], &bx).unwrap();
    assert_eq!(r.spacetime.max_abs(), 0.0);
}

#[test]
fn rotation_current_routes_agree() {
    let (g, m) = solved(16, 2, Potential::Mass { m: 1.0 }, Orientation::Positive, bumpy);
    let a = m.split().algebra();
    let bx = Multivector::blade(a, 0b0011, 1.0);
    let by = Multivector::blade(a, 0b1100, 1.0);
    let x0 = [0.3, 0.6];
    let r = rotation_currents(&g, &m, &bx, &x0, &by).unwrap();
    let centre = m.split().spacetime_vector(&x0);
    let via_x = noether_current(&g, &m, &Affine::rotation_about(bx.clone(), &centre), r.spacetime.generator.clone()).unwrap();
    assert!(r.spacetime.max_difference(&via_x) < 1e-10, "{}", r.spacetime.max_difference(&via_x));
    let via_y = noether_current(&g, &m, &Affine::rotation(by.clone()), r.field.generator.clone()).unwrap();
    assert!(r.field.max_difference(&via_y) < 1e-10, "{}", r.field.max_difference(&via_y));
}

#[test]
fn random_field_violates_continuity() {
    use rand::Rng;
    let split = SpacetimeSplit::new(2, 1, Orientation::Positive).unwrap();
    let m = ScalarFieldModel::new(split, Potential::Zero).unwrap();
    let mut g = FieldGrid::unit(split, 16).unwrap();
    let mut r = rng();
    for i in 0..g.node_count() {
        g.set_phi(i, &[r.gen_range(-1.0..1.0)]);
    }
    let j = energy_momentum_current(&g, &m, &[1.0, 0.0]).unwrap();
    assert!(continuity_residual(&g, &j).unwrap().max > 1.0);
}

#[test]
fn constant_momentum_mesh_flux_telescopes() {
    let mesh = SurfaceMesh::sphere_cap(1.0, 0.9, 4).unwrap();
    let a = Algebra::new(3).unwrap();
    let p = Multivector::from_terms(a, &[(0b011, 0.3), (0b101, -1.2), (0b110, 0.5)]);
    let patch: Vec<usize> = (0..mesh.faces().len()).collect();
    let ps = vec![p; patch.len()];
    let v0 = Affine::translation(Multivector::vector(a, &[0.2, 0.7, -0.4]).unwrap());
    assert!(mesh_patch_flux(&mesh, &patch, &ps, &v0).unwrap().abs() < 1e-14);
    let bad = AxisScaling::new(0);
    assert!(mesh_patch_flux(&mesh, &patch, &ps, &bad).unwrap().abs() > 1e-3);
}
