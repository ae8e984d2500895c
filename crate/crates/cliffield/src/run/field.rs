use std::f64::consts::PI;

use cliffield_core::dynamics::{lagrangian_action_check, solve_scalar_field, FieldGrid, SolveOptions};
use cliffield_core::hamiltonian::{ScalarFieldModel, SpacetimeSplit};
use cliffield_core::noether::{continuity_residual, energy_momentum_current, noether_current, patch_flux};
use cliffield_core::transforms::Affine;

use super::{last_order, Ctx};
use crate::config::{BoundaryPreset, FieldSpec, PotentialSpec};
use crate::io::{grid_table, Table};
use crate::RunError;

pub(super) const CHECKS: &[&str] = &[
    "action_order",
    "continuity_order",
    "flux_order",
    "max_constraint",
    "mixed_momentum",
    "oracle_error",
    "routes_agree",
];

type Profile = Box<dyn Fn(&[f64]) -> Vec<f64>>;

/// Boundary data and, when known, the exact solution it comes from.
fn boundary(preset: BoundaryPreset, potential: &PotentialSpec, n: usize) -> (Profile, bool) {
    match preset {
        BoundaryPreset::HarmonicSquare => (
            Box::new(move |x: &[f64]| vec![(PI * x[0]).sin() * (PI * x[1]).sinh() / PI.sinh(); n]),
            true,
        ),
        BoundaryPreset::Mass1d => (Box::new(move |x: &[f64]| vec![x[0].cos() / 1f64.cos(); n]), true),
        BoundaryPreset::MassPlaneWave => {
            let m = match potential {
                PotentialSpec::Mass { m } => *m,
                _ => unreachable!("validated"),
            };
            (
                Box::new(move |x: &[f64]| {
                    let phase = m * (0.6 * x[0] + 0.8 * x[1]) + 0.3;
                    (0..n).map(|a| (phase + a as f64).cos()).collect()
                }),
                true,
            )
        }
        BoundaryPreset::Bumpy => (
            Box::new(move |x: &[f64]| {
                let extra: f64 = x[2..].iter().map(|v| 0.2 * v).sum();
                (0..n)
                    .map(|a| (2.0 * x[0] + a as f64).sin() * (0.5 * x[1]).cosh() + x[0] * x[1] + extra)
                    .collect()
            }),
            false,
        ),
    }
}

struct Level {
    cells: usize,
    h: f64,
    sweeps: usize,
    oracle_error: Option<f64>,
    max_constraint: f64,
    mixed: f64,
    action_difference: f64,
    routes: f64,
    continuity: f64,
    flux: f64,
}

pub(super) fn run(spec: &FieldSpec, ctx: &mut Ctx) -> Result<(), RunError> {
    let split = SpacetimeSplit::new(spec.spacetime_dim, spec.field_dim, spec.orientation.into())?;
    let model = ScalarFieldModel::new(split, (&spec.potential).into())?;
    let (profile, exact) = boundary(spec.boundary, &spec.potential, spec.field_dim);
    let d = spec.spacetime_dim;
    let v = spec.translation.clone().unwrap_or_else(|| {
        let mut v = vec![0.0; d];
        v[0] = 1.0;
        v
    });
    let opts = SolveOptions {
        tol: spec.tol,
        max_iters: spec.max_iters,
        omega: spec.omega,
    };
    let mut levels = Vec::new();
    for r in 0..=spec.refinements {
        let cells = spec.cells << r;
        let mut grid = FieldGrid::unit(split, cells)?;
        grid.set_boundary(&profile);
        let report = solve_scalar_field(&mut grid, &model, &opts)?;
        let oracle_error = exact.then(|| {
            (0..grid.node_count())
                .flat_map(|i| {
                    let e = profile(&grid.coords(i));
                    grid.phi(i).iter().zip(e).map(|(a, b)| (a - b).abs()).collect::<Vec<_>>()
                })
                .fold(0.0, f64::max)
        });
        let mut mixed = 0.0f64;
        for p in grid.momenta().unwrap_or(&[]) {
            for a in 0..spec.field_dim {
                for b in a + 1..spec.field_dim {
                    let plane = split.field_basis(a).outer(&split.field_basis(b));
                    mixed = mixed.max(p.inner(&plane).max_abs());
                }
            }
        }
        let actions = lagrangian_action_check(&grid, &model)?;
        let j = energy_momentum_current(&grid, &model, &v)?;
        let via_p = noether_current(
            &grid,
            &model,
            &Affine::translation(split.spacetime_vector(&v)),
            j.generator.clone(),
        )?;
        let continuity = continuity_residual(&grid, &j)?;
        let quarter = vec![cells / 4; d];
        let three_quarters = vec![3 * cells / 4; d];
        let flux = patch_flux(&grid, &j, &quarter, &three_quarters)?;
        if r == 0 {
            ctx.out.table("grid.csv", &grid_table(&grid))?;
            let mut t = Table::new(
                (0..d)
                    .map(|k| format!("x{k}"))
                    .chain((0..d).map(|k| format!("j{k}")))
                    .chain(["continuity".to_string()]),
            );
            for node in 0..grid.node_count() {
                let mut row = grid.coords(node);
                row.extend_from_slice(&j.values[node]);
                row.push(continuity.per_node[node]);
                t.push(row);
            }
            ctx.out.table("current.csv", &t)?;
        }
        levels.push(Level {
            cells,
            h: grid.max_spacing(),
            sweeps: report.sweeps,
            oracle_error,
            max_constraint: report.max_constraint,
            mixed,
            action_difference: actions.difference(),
            routes: j.max_difference(&via_p),
            continuity: continuity.max,
            flux: flux.abs(),
        });
    }
    let mut t = Table::new([
        "cells",
        "h",
        "sweeps",
        "oracle_error",
        "max_constraint",
        "action_difference",
        "continuity_max",
        "patch_flux",
    ]);
    for l in &levels {
        t.push(vec![
            l.cells as f64,
            l.h,
            l.sweeps as f64,
            l.oracle_error.unwrap_or(f64::NAN),
            l.max_constraint,
            l.action_difference,
            l.continuity,
            l.flux,
        ]);
    }
    ctx.out.table("convergence.csv", &t)?;

    let base = &levels[0];
    if let Some(e) = base.oracle_error {
        let default = match spec.boundary {
            BoundaryPreset::HarmonicSquare => 5e-3,
            _ => 1e-2,
        };
        ctx.at_most("oracle_error", e, default);
    }
    let worst = |f: fn(&Level) -> f64| levels.iter().map(f).fold(0.0, f64::max);
    ctx.at_most("max_constraint", worst(|l| l.max_constraint), 1e-10);
    ctx.at_most("mixed_momentum", worst(|l| l.mixed), 0.0);
    ctx.at_most("routes_agree", worst(|l| l.routes), 1e-10);
    let hs: Vec<f64> = levels.iter().map(|l| l.h).collect();
    let series = |f: fn(&Level) -> f64| levels.iter().map(f).collect::<Vec<_>>();
    if let Some(p) = last_order(&hs, &series(|l| l.action_difference)) {
        ctx.at_least("action_order", p, 1.8);
    }
    if let Some(p) = last_order(&hs, &series(|l| l.continuity)) {
        ctx.at_least("continuity_order", p, 1.8);
    }
    if let Some(p) = last_order(&hs, &series(|l| l.flux)) {
        ctx.at_least("flux_order", p, 1.8);
    }
    Ok(())
}
