use cliffield_core::dynamics::integrate_worldline_with;
use cliffield_core::hamiltonian::StringModel;
use cliffield_core::hj::{hj_residual, motion_from_hj, RadialSolution};
use cliffield_core::noether::charge_along_worldline;
use cliffield_core::stats::max_line_deviation;
use cliffield_core::transforms::Affine;
use cliffield_core::{Algebra, Multivector};
use rand::Rng;

use super::Ctx;
use crate::config::ParticleSpec;
use crate::io::Table;
use crate::RunError;

pub(super) const CHECKS: &[&str] = &[
    "charge_spread",
    "constraint_drift",
    "hj_motion_error",
    "hj_residual",
    "line_deviation",
];

fn random_vector(alg: Algebra, rng: &mut impl Rng, r: f64) -> Multivector {
    let c: Vec<f64> = (0..alg.dim()).map(|_| rng.gen_range(-r..r)).collect();
    Multivector::vector(alg, &c).expect("length matches")
}

fn random_direction(alg: Algebra, rng: &mut impl Rng) -> Multivector {
    loop {
        let v = random_vector(alg, rng, 1.0);
        if v.magnitude() > 0.1 {
            return v.normalized().expect("nonzero");
        }
    }
}

pub(super) fn run(spec: &ParticleSpec, ctx: &mut Ctx) -> Result<(), RunError> {
    let alg = Algebra::new(spec.dim)?;
    let model = StringModel::new(alg, 1, spec.tension)?;
    let mut starts = Vec::with_capacity(spec.worldlines);
    for k in 0..spec.worldlines {
        let q0 = match (&spec.q0, k) {
            (Some(q), 0) => Multivector::vector(alg, q)?,
            _ => random_vector(alg, &mut ctx.rng, 2.0),
        };
        let p0 = match (&spec.p0, k) {
            (Some(p), 0) => Multivector::vector(alg, p)?,
            _ => &random_direction(alg, &mut ctx.rng) * spec.tension,
        };
        starts.push((q0, p0));
    }
    let generators: Vec<Affine> = (0..spec.generators)
        .map(|_| {
            let mut b = Multivector::zero(alg);
            for blade in alg.blades_of_grade(2) {
                b += &Multivector::blade(alg, blade, ctx.rng.gen_range(-1.0..1.0));
            }
            Affine::new(b, random_vector(alg, &mut ctx.rng, 1.0), "rigid")
        })
        .collect();

    let mut table = Table::new(
        ["worldline", "s"]
            .into_iter()
            .map(String::from)
            .chain((0..spec.dim).map(|i| format!("q{i}")))
            .chain((0..spec.dim).map(|i| format!("p{i}")))
            .chain(["lambda".to_string()]),
    );
    let mut charges = Table::new(["worldline", "generator", "initial", "spread"]);
    let (mut deviation, mut drift, mut spread, mut hj_res, mut hj_err) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (k, (q0, p0)) in starts.iter().enumerate() {
        let w = integrate_worldline_with(&model, q0, p0, spec.length, spec.step, spec.lambda_sign.into())?;
        for (i, s) in w.samples.iter().enumerate() {
            let mut row = vec![k as f64, i as f64 * w.step];
            row.extend(s.q.vector_part());
            row.extend(s.p.vector_part());
            row.push(s.lambda);
            table.push(row);
        }
        let pts: Vec<Vec<f64>> = w.positions().map(Multivector::vector_part).collect();
        deviation = deviation.max(max_line_deviation(&pts));
        drift = drift.max(w.max_constraint(&model));
        for (g, v) in generators.iter().enumerate() {
            let c = charge_along_worldline(&w, v);
            spread = spread.max(c.spread);
            charges.push(vec![k as f64, g as f64, c.charges[0].value.scalar_part(), c.spread]);
        }
        // the worldline is a ray of S = Λ|q − c| with c one unit behind q0
        if w.samples.len() > 1 {
            let u = (&w.samples[1].q - q0).normalized().ok_or(cliffield_core::Error::DegenerateGauge)?;
            let sol = RadialSolution::new(spec.tension, &(q0 - &u));
            for s in &w.samples {
                hj_res = hj_res.max(hj_residual(&model, &sol, &s.q)?.abs());
            }
            let r = motion_from_hj(&model, &sol, q0, spec.length, spec.step)?;
            for (a, b) in r.samples.iter().zip(&w.samples) {
                hj_err = hj_err.max((&a.q - &b.q).magnitude());
            }
            if r.samples.len() != w.samples.len() {
                hj_err = f64::MAX;
            }
        }
    }
    ctx.out.table("worldlines.csv", &table)?;
    ctx.out.table("charges.csv", &charges)?;
    ctx.at_most("line_deviation", deviation, 1e-8);
    ctx.at_most("constraint_drift", drift, 1e-8);
    ctx.at_most("charge_spread", spread, 1e-8);
    ctx.at_most("hj_residual", hj_res, 1e-6);
    ctx.at_most("hj_motion_error", hj_err, 1e-6);
    Ok(())
}
