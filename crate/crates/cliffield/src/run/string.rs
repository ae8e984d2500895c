use cliffield_core::dynamics::{
    catenoid_area, project_to_circle, relax_minimal_surface, RelaxOptions, RelaxReport, SurfaceMesh,
};
use cliffield_core::stats::observed_orders;

use super::Ctx;
use crate::config::{MeshSource, StringSpec};
use crate::io::{mesh_json, read_mesh, Table};
use crate::RunError;

pub(super) const CHECKS: &[&str] = &[
    "area_increase",
    "area_rel_error",
    "curvature_order",
    "fixed_point",
    "max_gradient",
];

/// Segments and bands of the coarsest catenoid mesh, before refinement.
const CATENOID_BASE: (usize, usize) = (6, 1);

/// Gradient tolerance per level is this factor times `h³`, so the algebraic
/// error stays below the discretization error as the mesh is refined.
pub const CATENOID_TOL_FACTOR: f64 = 0.03;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepLevel {
    pub level: usize,
    pub h: f64,
    pub vertices: usize,
    pub faces: usize,
    pub report: RelaxReport,
    pub mesh: SurfaceMesh,
}

impl SweepLevel {
    pub fn area_rel_error(&self, a: f64) -> f64 {
        (self.report.final_area - catenoid_area(a)).abs() / catenoid_area(a)
    }
}

/// Relaxes the catenoid between the circles `r = cosh a` at `z = ±a` at
/// refinement levels `from..=to`, warm-starting each level from the
/// refined previous one.
pub fn catenoid_sweep(a: f64, from: usize, to: usize, base: &RelaxOptions) -> cliffield_core::Result<Vec<SweepLevel>> {
    let project = project_to_circle(a.cosh());
    let mut mesh = SurfaceMesh::catenoid_initial(a, CATENOID_BASE.0, CATENOID_BASE.1)?;
    for _ in 0..from {
        mesh = mesh.refine(Some(&project));
    }
    let mut out = Vec::new();
    for level in from..=to {
        if level > from {
            mesh = mesh.refine(Some(&project));
        }
        let h = mesh.max_edge_length();
        let opts = RelaxOptions {
            tol: CATENOID_TOL_FACTOR * h * h * h,
            ..*base
        };
        let report = relax_minimal_surface(&mut mesh, &opts)?;
        out.push(SweepLevel {
            level,
            h,
            vertices: mesh.vertex_count(),
            faces: mesh.faces().len(),
            report,
            mesh: mesh.clone(),
        });
    }
    Ok(out)
}

fn area_increase(r: &RelaxReport) -> f64 {
    r.area_history.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max)
}

fn history_table(r: &RelaxReport) -> Table {
    let mut t = Table::new(["iteration", "area"]);
    for (i, a) in r.area_history.iter().enumerate() {
        t.push(vec![i as f64, *a]);
    }
    t
}

pub(super) fn run(spec: &StringSpec, ctx: &mut Ctx) -> Result<(), RunError> {
    let opts = RelaxOptions {
        tension: spec.tension,
        tol: spec.tol,
        max_iters: spec.max_iters,
        method: spec.method.into(),
    };
    let mesh = match &spec.mesh {
        MeshSource::Catenoid { a, levels } => return run_catenoid(*a, *levels, &opts, ctx),
        MeshSource::FlatDisk { dim, rings } => SurfaceMesh::flat_disk(*dim, 1.0, *rings)?,
        MeshSource::SphereCap { theta_max, rings } => SurfaceMesh::sphere_cap(1.0, *theta_max, *rings)?,
        MeshSource::File { path } => read_mesh(path)?,
    };
    let initial = mesh.clone();
    let mut relaxed = mesh;
    let report = relax_minimal_surface(&mut relaxed, &opts)?;
    ctx.out.write("mesh_final.json", &mesh_json(&relaxed))?;
    ctx.out.table("relaxation.csv", &history_table(&report))?;
    ctx.at_most("max_gradient", report.max_gradient, spec.tol);
    ctx.at_most("area_increase", area_increase(&report), 1e-12);
    if let MeshSource::FlatDisk { .. } = spec.mesh {
        let moved = initial
            .vertices()
            .zip(relaxed.vertices())
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        ctx.at_most("fixed_point", moved, 1e-12);
    }
    Ok(())
}

fn run_catenoid(a: f64, levels: [usize; 2], opts: &RelaxOptions, ctx: &mut Ctx) -> Result<(), RunError> {
    let sweep = catenoid_sweep(a, levels[0], levels[1], opts)?;
    let mut t = Table::new([
        "level",
        "h",
        "vertices",
        "iterations",
        "area",
        "area_rel_error",
        "max_curvature_residual",
        "rms_curvature_residual",
    ]);
    for l in &sweep {
        t.push(vec![
            l.level as f64,
            l.h,
            l.vertices as f64,
            l.report.iterations as f64,
            l.report.final_area,
            l.area_rel_error(a),
            l.report.curvature.max,
            l.report.curvature.rms,
        ]);
    }
    ctx.out.table("convergence.csv", &t)?;
    let finest = sweep.last().expect("at least one level");
    ctx.out.write("mesh_final.json", &mesh_json(&finest.mesh))?;
    ctx.at_most("area_rel_error", finest.area_rel_error(a), 1e-2);
    ctx.at_most(
        "area_increase",
        sweep.iter().map(|l| area_increase(&l.report)).fold(0.0, f64::max),
        1e-12,
    );
    if sweep.len() > 1 {
        let hs: Vec<f64> = sweep.iter().map(|l| l.h).collect();
        let res: Vec<f64> = sweep.iter().map(|l| l.report.curvature.max).collect();
        let order = observed_orders(&hs, &res).into_iter().fold(f64::INFINITY, f64::min);
        ctx.at_least("curvature_order", order, 1.0);
    }
    Ok(())
}
