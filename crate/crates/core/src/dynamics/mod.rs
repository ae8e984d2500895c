//! Solvers for the canonical equations: unit-speed worldlines, minimal
//! surfaces for the string and the De Donder-Weyl grid solver.

mod field;
mod grid;
mod limit;
mod mesh;
mod minimal;
mod worldline;

pub use field::{
    field_residual, lagrangian_action_check, optimal_omega, recover_momentum, solve_scalar_field, ActionComparison,
    SolveOptions, SolveReport, DIVERGENCE_WINDOW,
};
pub use grid::FieldGrid;
pub use limit::{string_to_scalar_limit, LimitReport, LimitRow};
pub use mesh::{catenoid_area, project_to_circle, CurvatureResidual, SurfaceMesh};
pub use minimal::{relax_minimal_surface, DescentMethod, RelaxOptions, RelaxReport};
pub use worldline::{
    integrate_worldline, integrate_worldline_with, project_to_constraint, LambdaSign, Worldline, WorldlineSample,
    DRIFT_TOL, INITIAL_CONSTRAINT_TOL,
};
