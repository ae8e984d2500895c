use cliffield_core::hamiltonian::{random_phase_points, HamiltonianModel, ScalarFieldModel, SpacetimeSplit, StringModel};
use cliffield_core::noether::{finite_symmetry_check, symmetry_defect};
use cliffield_core::transforms::{Affine, AxisScaling, Diffeo, RotorMap, Scaling, Translation, VectorField};
use cliffield_core::{Algebra, Multivector};

use super::Ctx;
use crate::config::{Expectation, GeneratorSpec, ModelSpec, SymmetrySpec};
use crate::io::Table;
use crate::report::Check;
use crate::RunError;

pub(super) fn check_names(spec: &SymmetrySpec) -> Vec<String> {
    let mut names: Vec<String> = spec.generators.iter().map(|g| format!("{}_defect", g.label())).collect();
    names.sort_unstable();
    names.dedup();
    names
}

fn build_model(m: &ModelSpec) -> Result<Box<dyn HamiltonianModel>, RunError> {
    Ok(match m {
        ModelSpec::String {
            dim,
            motion_dim,
            tension,
        } => Box::new(StringModel::new(Algebra::new(*dim)?, *motion_dim, *tension)?),
        ModelSpec::ScalarField {
            spacetime_dim,
            field_dim,
            orientation,
            potential,
        } => Box::new(ScalarFieldModel::new(
            SpacetimeSplit::new(*spacetime_dim, *field_dim, (*orientation).into())?,
            potential.into(),
        )?),
    })
}

fn generator(alg: Algebra, g: &GeneratorSpec) -> Result<(Box<dyn Diffeo>, Box<dyn VectorField>), RunError> {
    Ok(match g {
        GeneratorSpec::Translation { offset, .. } => {
            let v = Multivector::vector(alg, offset)?;
            (Box::new(Translation::new(v.clone())), Box::new(Affine::translation(v)))
        }
        GeneratorSpec::Rotation { plane, angle, .. } => {
            let b = Multivector::blade(alg, (1 << (plane[0] - 1)) | (1 << (plane[1] - 1)), *angle);
            let b = if plane[0] > plane[1] { -b } else { b };
            (
                Box::new(RotorMap::new(&b, Multivector::zero(alg), "rotation")),
                Box::new(Affine::rotation(b)),
            )
        }
        GeneratorSpec::Scaling { axis, factor, .. } => (
            Box::new(Scaling::new(axis - 1, *factor)),
            Box::new(AxisScaling::new(axis - 1)),
        ),
    })
}

pub(super) fn run(spec: &SymmetrySpec, ctx: &mut Ctx) -> Result<(), RunError> {
    let model = build_model(&spec.model)?;
    let alg = model.algebra();
    let samples = random_phase_points(&*model, spec.samples, &mut ctx.rng);
    let mut t = Table::new(["generator", "finite_defect", "infinitesimal_defect", "expected_symmetry"]);
    for (k, g) in spec.generators.iter().enumerate() {
        let (finite, field) = generator(alg, g)?;
        let f = finite_symmetry_check(&*model, &*finite, &samples)?.max_defect;
        let mut inf = 0.0f64;
        for (q, p) in &samples {
            inf = inf.max(symmetry_defect(&*model, &*field, q, p)?.abs());
        }
        let expected = g.expect() == Expectation::Symmetry;
        t.push(vec![k as f64, f, inf, if expected { 1.0 } else { 0.0 }]);
        let name = format!("{}_defect", g.label());
        ctx.push(if expected {
            Check::at_most(&name, f.max(inf), 1e-8)
        } else {
            Check::at_least(&name, f.min(inf), 1e-3)
        });
    }
    ctx.out.table("defects.csv", &t)?;
    Ok(())
}
