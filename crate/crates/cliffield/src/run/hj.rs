use cliffield_core::dynamics::Worldline;
use cliffield_core::hamiltonian::StringModel;
use cliffield_core::hj::{
    conserved_from_family, hj_residual, momentum_curl, motion_from_hj, HJSolution, PlaneWave, RadialSolution,
    SINGULAR_EXCLUSION,
};
use cliffield_core::noether::charge_along_worldline;
use cliffield_core::transforms::Affine;
use cliffield_core::{Algebra, Multivector};
use rand::Rng;

use super::Ctx;
use crate::config::{HjSpec, SolutionSpec};
use crate::io::Table;
use crate::RunError;

pub(super) const CHECKS: &[&str] = &["charge_spread", "curl", "family_spread", "hj_residual", "motion_error"];

/// Probes closer than this to the singular centre are redrawn.
const PROBE_MARGIN: f64 = 10.0 * SINGULAR_EXCLUSION;

/// Curl checks use a subset of the probes; each costs a nested stencil.
const CURL_PROBES: usize = 50;

fn random_vector(alg: Algebra, rng: &mut impl Rng, r: f64) -> Multivector {
    let c: Vec<f64> = (0..alg.dim()).map(|_| rng.gen_range(-r..r)).collect();
    Multivector::vector(alg, &c).expect("length matches")
}

fn ray_table(rays: &[Worldline], dim: usize) -> Table {
    let mut t = Table::new(
        ["ray", "s"]
            .into_iter()
            .map(String::from)
            .chain((0..dim).map(|i| format!("q{i}"))),
    );
    for (k, w) in rays.iter().enumerate() {
        for (i, s) in w.samples.iter().enumerate() {
            let mut row = vec![k as f64, i as f64 * w.step];
            row.extend(s.q.vector_part());
            t.push(row);
        }
    }
    t
}

pub(super) fn run(spec: &HjSpec, ctx: &mut Ctx) -> Result<(), RunError> {
    let alg = Algebra::new(spec.dim)?;
    let model = StringModel::new(alg, 1, spec.tension)?;
    let (sol, radial): (Box<dyn HJSolution>, Option<RadialSolution>) = match &spec.solution {
        SolutionSpec::Radial { center } => {
            let s = RadialSolution::new(spec.tension, &Multivector::vector(alg, center)?);
            (Box::new(s.clone()), Some(s))
        }
        SolutionSpec::PlaneWave { direction } => {
            let u = Multivector::vector(alg, direction)?.normalized().expect("validated nonzero");
            (Box::new(PlaneWave::new(spec.tension, &u)), None)
        }
    };
    let mut probes = Table::new(
        (0..spec.dim)
            .map(|i| format!("q{i}"))
            .chain(["residual".to_string()]),
    );
    let (mut worst, mut curl) = (0.0f64, 0.0f64);
    for k in 0..spec.probes {
        let q = loop {
            let q = random_vector(alg, &mut ctx.rng, spec.half_width);
            if sol.contains(&q, PROBE_MARGIN) {
                break q;
            }
        };
        let r = hj_residual(&model, &*sol, &q)?;
        worst = worst.max(r.abs());
        if k < CURL_PROBES {
            curl = curl.max(momentum_curl(&*sol, &q)?);
        }
        let mut row = q.vector_part();
        row.push(r);
        probes.push(row);
    }
    ctx.out.table("probes.csv", &probes)?;

    let mut rays = Vec::with_capacity(spec.rays);
    let (mut motion, mut family, mut charge) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..spec.rays {
        let u = loop {
            if let Some(u) = random_vector(alg, &mut ctx.rng, 1.0).normalized() {
                break u;
            }
        };
        let (start, dir) = match &radial {
            Some(r) => {
                let c = Multivector::vector(alg, r.center())?;
                (&c + &u, u)
            }
            None => {
                let SolutionSpec::PlaneWave { direction } = &spec.solution else {
                    unreachable!()
                };
                (u, Multivector::vector(alg, direction)?.normalized().expect("validated"))
            }
        };
        let w = motion_from_hj(&model, &*sol, &start, spec.ray_length, spec.ray_step)?;
        for (i, s) in w.samples.iter().enumerate() {
            let exact = &start + &(&dir * (i as f64 * w.step));
            motion = motion.max((&s.q - &exact).magnitude());
        }
        if let Some(r) = &radial {
            for i in 0..spec.dim {
                family = family.max(conserved_from_family(r, &w, i)?.spread);
            }
        }
        for i in 0..spec.dim {
            let c = charge_along_worldline(&w, &Affine::translation(Multivector::basis(alg, i)));
            charge = charge.max(c.spread);
        }
        rays.push(w);
    }
    ctx.out.table("rays.csv", &ray_table(&rays, spec.dim))?;
    ctx.at_most("hj_residual", worst, 1e-6);
    ctx.at_most("curl", curl, 1e-4);
    ctx.at_most("motion_error", motion, 1e-6);
    ctx.at_most("charge_spread", charge, 1e-6);
    if radial.is_some() {
        ctx.at_most("family_spread", family, 1e-6);
    }
    Ok(())
}
