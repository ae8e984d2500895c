//! Scenario dispatch.

mod field;
mod hj;
mod particle;
mod string;
mod symmetry;

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{Scenario, ScenarioConfig};
use crate::io::ArtifactWriter;
use crate::report::{Check, RunReport, Status};
use crate::RunError;

pub use string::{catenoid_sweep, SweepLevel};

/// Name of the report file written next to the artifacts.
pub const REPORT_FILE: &str = "report.json";

/// Check names a scenario can emit, for validating tolerance overrides.
pub fn check_names(s: &Scenario) -> Vec<String> {
    let fixed = match s {
        Scenario::Particle(_) => particle::CHECKS,
        Scenario::String(_) => string::CHECKS,
        Scenario::Field(_) => field::CHECKS,
        Scenario::CheckSymmetry(s) => return symmetry::check_names(s),
        Scenario::HjVerify(_) => hj::CHECKS,
    };
    fixed.iter().map(|s| s.to_string()).collect()
}

pub(crate) struct Ctx<'a> {
    tolerances: &'a BTreeMap<String, f64>,
    checks: Vec<Check>,
    pub(crate) out: ArtifactWriter,
    pub(crate) rng: ChaCha8Rng,
}

impl Ctx<'_> {
    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub(crate) fn at_most(&mut self, name: &'static str, value: f64, default: f64) {
        let t = self.tol(name, default);
        self.checks.push(Check::at_most(name, value, t));
    }

    pub(crate) fn at_least(&mut self, name: &'static str, value: f64, default: f64) {
        let t = self.tol(name, default);
        self.checks.push(Check::at_least(name, value, t));
    }

    pub(crate) fn push(&mut self, c: Check) {
        let t = self.tol(&c.name, c.tolerance);
        let c = match c.comparison {
            crate::report::Comparison::AtMost => Check::at_most(&c.name, c.value, t),
            crate::report::Comparison::AtLeast => Check::at_least(&c.name, c.value, t),
        };
        self.checks.push(c);
    }
}

/// Runs one scenario, writing artifacts and `report.json` under `out_dir`.
///
/// Configuration problems found before anything is written come back as
/// `Err`; solver and IO failures end up in the report with
/// [`Status::SolverError`].
pub fn run_scenario(cfg: &ScenarioConfig, out_dir: &Path) -> Result<RunReport, RunError> {
    cfg.validate()?;
    let start = Instant::now();
    let mut ctx = Ctx {
        tolerances: &cfg.tolerances,
        checks: Vec::new(),
        out: ArtifactWriter::new(out_dir),
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
    };
    let result = match &cfg.scenario {
        Scenario::Particle(p) => particle::run(p, &mut ctx),
        Scenario::String(s) => string::run(s, &mut ctx),
        Scenario::Field(f) => field::run(f, &mut ctx),
        Scenario::CheckSymmetry(s) => symmetry::run(s, &mut ctx),
        Scenario::HjVerify(h) => hj::run(h, &mut ctx),
    };
    let error = match result {
        Ok(()) => None,
        Err(e @ RunError::Config(_)) if ctx.out.is_empty() => return Err(e),
        Err(e) => Some(e.to_string()),
    };
    let status = if error.is_some() {
        Status::SolverError
    } else if ctx.checks.iter().all(|c| c.pass) {
        Status::Passed
    } else {
        Status::ChecksFailed
    };
    let Ctx { checks, out, .. } = ctx;
    let report = RunReport {
        scenario: cfg.clone(),
        status,
        checks,
        artifacts: out.into_manifest(),
        error,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    std::fs::create_dir_all(out_dir)?;
    let mut json = serde_json::to_vec_pretty(&report).map_err(std::io::Error::other)?;
    json.push(b'\n');
    std::fs::write(out_dir.join(REPORT_FILE), json)?;
    Ok(report)
}

/// Observed order `log(e_coarse/e_fine) / log(h_coarse/h_fine)` of the last
/// two levels, or `None` when the coarse value is at the roundoff floor.
pub(crate) fn last_order(hs: &[f64], errs: &[f64]) -> Option<f64> {
    let n = errs.len();
    if n < 2 || errs[n - 2].abs() < 1e-12 {
        return None;
    }
    Some((errs[n - 2].abs() / errs[n - 1].abs()).ln() / (hs[n - 2] / hs[n - 1]).ln())
}
