//! Scenario configuration, read from TOML.

use std::collections::BTreeMap;
use std::path::PathBuf;

use cliffield_core::dynamics::{DescentMethod, LambdaSign};
use cliffield_core::hamiltonian::{Orientation, Potential};
use serde::{Deserialize, Serialize};

use crate::RunError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    pub scenario: Scenario,
    /// Overrides for the scenario's check tolerances, keyed by check name.
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Scenario {
    Particle(ParticleSpec),
    String(StringSpec),
    Field(FieldSpec),
    CheckSymmetry(SymmetrySpec),
    HjVerify(HjSpec),
}

impl Scenario {
    pub fn kind(&self) -> &'static str {
        match self {
            Scenario::Particle(_) => "particle",
            Scenario::String(_) => "string",
            Scenario::Field(_) => "field",
            Scenario::CheckSymmetry(_) => "check-symmetry",
            Scenario::HjVerify(_) => "hj-verify",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sign {
    Positive,
    Negative,
}

impl From<Sign> for LambdaSign {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => LambdaSign::Positive,
            Sign::Negative => LambdaSign::Negative,
        }
    }
}

impl From<Sign> for Orientation {
    fn from(s: Sign) -> Self {
        match s {
            Sign::Positive => Orientation::Positive,
            Sign::Negative => Orientation::Negative,
        }
    }
}

fn positive() -> Sign {
    Sign::Positive
}

fn one() -> f64 {
    1.0
}

/// Straight-line worldlines of the relativistic particle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpec {
    pub dim: usize,
    #[serde(default = "one")]
    pub tension: f64,
    pub length: f64,
    pub step: f64,
    /// Number of worldlines; starts beyond `q0`/`p0` are drawn from the seed.
    #[serde(default = "default_worldlines")]
    pub worldlines: usize,
    /// Random generators `v = q·B₀ + v₀` whose charges are tracked.
    #[serde(default = "default_generators")]
    pub generators: usize,
    #[serde(default = "positive")]
    pub lambda_sign: Sign,
    pub q0: Option<Vec<f64>>,
    pub p0: Option<Vec<f64>>,
}

fn default_worldlines() -> usize {
    1
}

fn default_generators() -> usize {
    5
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Steepest,
    ConjugateGradient,
}

impl From<Method> for DescentMethod {
    fn from(m: Method) -> Self {
        match m {
            Method::Steepest => DescentMethod::Steepest,
            Method::ConjugateGradient => DescentMethod::ConjugateGradient,
        }
    }
}

fn cg() -> Method {
    Method::ConjugateGradient
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MeshSource {
    /// Catenoid between the circles `r = cosh a` at `z = ±a`, relaxed at
    /// every refinement level in `levels`.
    Catenoid { a: f64, levels: [usize; 2] },
    /// Flat disk of radius 1 in `R^dim`; relaxation must leave it unchanged.
    FlatDisk { dim: usize, rings: usize },
    /// Spherical cap of radius 1 spanning a fixed circle.
    SphereCap { theta_max: f64, rings: usize },
    /// A mesh read from a JSON file.
    File { path: PathBuf },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StringSpec {
    pub mesh: MeshSource,
    #[serde(default = "one")]
    pub tension: f64,
    /// Gradient tolerance of the relaxation; the catenoid sweep scales it
    /// with the mesh size instead.
    #[serde(default = "default_relax_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    #[serde(default = "cg")]
    pub method: Method,
}

fn default_relax_tol() -> f64 {
    1e-8
}

fn default_max_iters() -> usize {
    100_000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Mass { m: f64 },
    Quartic { m: f64, g: f64 },
    Anisotropic { masses: Vec<f64> },
}

impl From<&PotentialSpec> for Potential {
    fn from(p: &PotentialSpec) -> Self {
        match p {
            PotentialSpec::Zero => Potential::Zero,
            PotentialSpec::Mass { m } => Potential::Mass { m: *m },
            PotentialSpec::Quartic { m, g } => Potential::Quartic { m: *m, g: *g },
            PotentialSpec::Anisotropic { masses } => Potential::Anisotropic { masses: masses.clone() },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryPreset {
    /// `sin(πx₁) sinh(πx₂) / sinh π`, harmonic; needs `V = 0` on the unit box.
    HarmonicSquare,
    /// `cos(x₁) / cos 1`, solving the mass-1 equation.
    Mass1d,
    /// `cos(k·x + 0.3)` with `|k| = m` along `(3, 4, 0, ...)/5`, solving the
    /// mass equation in any dimension.
    MassPlaneWave,
    /// Smooth data with no closed-form solution.
    Bumpy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    #[serde(default = "two")]
    pub spacetime_dim: usize,
    #[serde(default = "one_usize")]
    pub field_dim: usize,
    #[serde(default = "positive")]
    pub orientation: Sign,
    pub potential: PotentialSpec,
    pub boundary: BoundaryPreset,
    /// Cells per axis on the unit box.
    pub cells: usize,
    /// Extra levels, each doubling `cells`, used for observed orders.
    #[serde(default = "one_usize")]
    pub refinements: usize,
    /// Spacetime translation whose current is checked.
    pub translation: Option<Vec<f64>>,
    #[serde(default = "default_field_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iters")]
    pub max_iters: usize,
    pub omega: Option<f64>,
}

fn two() -> usize {
    2
}

fn one_usize() -> usize {
    1
}

fn default_field_tol() -> f64 {
    1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    String {
        dim: usize,
        #[serde(default = "one_usize")]
        motion_dim: usize,
        #[serde(default = "one")]
        tension: f64,
    },
    ScalarField {
        #[serde(default = "two")]
        spacetime_dim: usize,
        #[serde(default = "one_usize")]
        field_dim: usize,
        #[serde(default = "positive")]
        orientation: Sign,
        potential: PotentialSpec,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    Symmetry,
    Broken,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GeneratorSpec {
    /// Shift by `offset`.
    Translation { offset: Vec<f64>, expect: Expectation },
    /// Rotation by `angle` in the plane of the 1-based axes `plane`.
    Rotation {
        plane: [usize; 2],
        angle: f64,
        expect: Expectation,
    },
    /// Stretch of the 1-based `axis` by `factor`.
    Scaling { axis: usize, factor: f64, expect: Expectation },
}

impl GeneratorSpec {
    pub fn expect(&self) -> Expectation {
        match self {
            GeneratorSpec::Translation { expect, .. }
            | GeneratorSpec::Rotation { expect, .. }
            | GeneratorSpec::Scaling { expect, .. } => *expect,
        }
    }

    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::Translation { .. } => "translation".into(),
            GeneratorSpec::Rotation { plane, .. } => format!("rotation_{}{}", plane[0], plane[1]),
            GeneratorSpec::Scaling { axis, .. } => format!("scaling_{axis}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetrySpec {
    pub model: ModelSpec,
    pub samples: usize,
    pub generators: Vec<GeneratorSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SolutionSpec {
    /// `Λ|q − center|`.
    Radial { center: Vec<f64> },
    /// `Λ u·q` for unit `u`.
    PlaneWave { direction: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HjSpec {
    pub dim: usize,
    #[serde(default = "one")]
    pub tension: f64,
    pub solution: SolutionSpec,
    /// Random probe points in the box `[-half_width, half_width]^dim`.
    pub probes: usize,
    pub half_width: f64,
    /// Reconstructed motions, each of length `ray_length`.
    #[serde(default = "default_rays")]
    pub rays: usize,
    #[serde(default = "default_ray_length")]
    pub ray_length: f64,
    #[serde(default = "default_ray_step")]
    pub ray_step: f64,
}

fn default_rays() -> usize {
    5
}

fn default_ray_length() -> f64 {
    2.0
}

fn default_ray_step() -> f64 {
    0.05
}

fn bad(msg: impl Into<String>) -> RunError {
    RunError::Config(msg.into())
}

fn need(cond: bool, msg: &str) -> Result<(), RunError> {
    if cond {
        Ok(())
    } else {
        Err(bad(msg))
    }
}

fn check_vec(v: &Option<Vec<f64>>, dim: usize, what: &str) -> Result<(), RunError> {
    match v {
        Some(v) if v.len() != dim => Err(bad(format!("{what} needs {dim} components, got {}", v.len()))),
        Some(v) if v.iter().any(|x| !x.is_finite()) => Err(bad(format!("{what} must be finite"))),
        _ => Ok(()),
    }
}

fn check_potential(p: &PotentialSpec, field_dim: usize) -> Result<(), RunError> {
    match p {
        PotentialSpec::Zero => Ok(()),
        PotentialSpec::Mass { m } => need(m.is_finite(), "mass must be finite"),
        PotentialSpec::Quartic { m, g } => need(m.is_finite() && g.is_finite(), "quartic parameters must be finite"),
        PotentialSpec::Anisotropic { masses } => need(
            masses.len() == field_dim && masses.iter().all(|m| m.is_finite()),
            "anisotropic potential needs one finite mass per field component",
        ),
    }
}

fn check_model(m: &ModelSpec) -> Result<(), RunError> {
    match m {
        ModelSpec::String {
            dim,
            motion_dim,
            tension,
        } => {
            need((1..=8).contains(dim), "string dim must be in 1..=8")?;
            need(*motion_dim >= 1 && motion_dim <= dim, "motion_dim must be in 1..=dim")?;
            need(*tension > 0.0, "tension must be positive")
        }
        ModelSpec::ScalarField {
            spacetime_dim,
            field_dim,
            potential,
            ..
        } => {
            need(*spacetime_dim >= 2 && *field_dim >= 1, "scalar field needs spacetime_dim >= 2 and field_dim >= 1")?;
            need(spacetime_dim + field_dim <= 8, "spacetime_dim + field_dim must be at most 8")?;
            check_potential(potential, *field_dim)
        }
    }
}

impl ScenarioConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, RunError> {
        let cfg: Self = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, RunError> {
        let text = std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    /// Schema checks beyond what deserialization enforces.
    pub fn validate(&self) -> Result<(), RunError> {
        need(!self.name.trim().is_empty(), "name must not be empty")?;
        for (name, tol) in &self.tolerances {
            need(*tol > 0.0 && tol.is_finite(), "tolerances must be positive")?;
            if !crate::run::check_names(&self.scenario).contains(name) {
                return Err(bad(format!("unknown check `{name}` for a {} scenario", self.scenario.kind())));
            }
        }
        match &self.scenario {
            Scenario::Particle(p) => {
                need((2..=8).contains(&p.dim), "particle dim must be in 2..=8")?;
                need(p.tension > 0.0, "tension must be positive")?;
                need(p.length >= 0.0 && p.length.is_finite(), "length must be >= 0")?;
                need(p.step > 0.0, "step must be positive")?;
                need(p.worldlines >= 1, "worldlines must be >= 1")?;
                check_vec(&p.q0, p.dim, "q0")?;
                check_vec(&p.p0, p.dim, "p0")
            }
            Scenario::String(s) => {
                need(s.tension > 0.0, "tension must be positive")?;
                need(s.tol > 0.0, "tol must be positive")?;
                need(s.max_iters >= 1, "max_iters must be >= 1")?;
                match &s.mesh {
                    MeshSource::Catenoid { a, levels } => {
                        need(*a > 0.0 && *a < 0.6, "catenoid a must lie in (0, 0.6)")?;
                        need(levels[0] <= levels[1] && levels[1] <= 7, "levels must be ordered and at most 7")
                    }
                    MeshSource::FlatDisk { dim, rings } => {
                        need((2..=8).contains(dim), "flat disk dim must be in 2..=8")?;
                        need(*rings >= 4, "resolution must be at least 4 rings")
                    }
                    MeshSource::SphereCap { theta_max, rings } => {
                        need(*theta_max > 0.0 && *theta_max < 1.5, "theta_max must lie in (0, 1.5)")?;
                        need(*rings >= 4, "resolution must be at least 4 rings")
                    }
                    MeshSource::File { .. } => Ok(()),
                }
            }
            Scenario::Field(f) => {
                check_model(&ModelSpec::ScalarField {
                    spacetime_dim: f.spacetime_dim,
                    field_dim: f.field_dim,
                    orientation: f.orientation,
                    potential: f.potential.clone(),
                })?;
                need(f.cells >= 4, "resolution must be at least 4 cells per axis")?;
                need(f.tol > 0.0, "tol must be positive")?;
                need(f.max_iters >= 1, "max_iters must be >= 1")?;
                need(f.refinements <= 3, "refinements must be at most 3")?;
                if let Some(w) = f.omega {
                    need(w > 0.0 && w < 2.0, "omega must lie in (0, 2)")?;
                }
                check_vec(&f.translation, f.spacetime_dim, "translation")?;
                match (f.boundary, &f.potential) {
                    (BoundaryPreset::HarmonicSquare, PotentialSpec::Zero) => {
                        need(f.spacetime_dim == 2, "harmonic-square needs spacetime_dim = 2")
                    }
                    (BoundaryPreset::HarmonicSquare, _) => Err(bad("harmonic-square needs the zero potential")),
                    (BoundaryPreset::Mass1d, PotentialSpec::Mass { m }) if *m == 1.0 => Ok(()),
                    (BoundaryPreset::Mass1d, _) => Err(bad("mass-1d needs the mass potential with m = 1")),
                    (BoundaryPreset::MassPlaneWave, PotentialSpec::Mass { .. }) => Ok(()),
                    (BoundaryPreset::MassPlaneWave, _) => Err(bad("mass-plane-wave needs the mass potential")),
                    (BoundaryPreset::Bumpy, _) => Ok(()),
                }
            }
            Scenario::CheckSymmetry(s) => {
                check_model(&s.model)?;
                need(s.samples >= 1, "samples must be >= 1")?;
                need(!s.generators.is_empty(), "at least one generator is required")?;
                let dim = match &s.model {
                    ModelSpec::String { dim, .. } => *dim,
                    ModelSpec::ScalarField {
                        spacetime_dim, field_dim, ..
                    } => spacetime_dim + field_dim,
                };
                for g in &s.generators {
                    match g {
                        GeneratorSpec::Translation { offset, .. } => check_vec(&Some(offset.clone()), dim, "offset")?,
                        GeneratorSpec::Rotation { plane, .. } => need(
                            plane[0] != plane[1] && plane.iter().all(|&i| (1..=dim).contains(&i)),
                            "rotation plane needs two distinct axes in 1..=dim",
                        )?,
                        GeneratorSpec::Scaling { axis, factor, .. } => {
                            need((1..=dim).contains(axis), "scaling axis must be in 1..=dim")?;
                            need(*factor > 0.0, "scaling factor must be positive")?
                        }
                    }
                }
                Ok(())
            }
            Scenario::HjVerify(h) => {
                need((2..=8).contains(&h.dim), "hj dim must be in 2..=8")?;
                need(h.tension > 0.0, "tension must be positive")?;
                need(h.probes >= 1 && h.half_width > 0.0, "probes and half_width must be positive")?;
                need(h.ray_length >= 0.0 && h.ray_step > 0.0, "ray_length must be >= 0 and ray_step > 0")?;
                match &h.solution {
                    SolutionSpec::Radial { center } => check_vec(&Some(center.clone()), h.dim, "center"),
                    SolutionSpec::PlaneWave { direction } => {
                        check_vec(&Some(direction.clone()), h.dim, "direction")?;
                        need(direction.iter().any(|x| *x != 0.0), "direction must be nonzero")
                    }
                }
            }
        }
    }
}
