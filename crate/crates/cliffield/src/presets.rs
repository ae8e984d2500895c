//! Built-in scenarios and the component catalogue.

use crate::config::ScenarioConfig;

/// `(name, description, TOML)`, sorted by name.
pub const PRESETS: &[(&str, &str, &str)] = &[
    (
        "catenoid",
        "minimal surface between two coaxial circles, refinement levels 3 to 5",
        include_str!("../presets/catenoid.toml"),
    ),
    (
        "flat-disk",
        "planar disk with fixed rim; relaxation must not move it",
        include_str!("../presets/flat-disk.toml"),
    ),
    (
        "harmonic-square",
        "massless field on the unit square against sin(pi x) sinh(pi y) / sinh(pi), three grid levels",
        include_str!("../presets/harmonic-square.toml"),
    ),
    (
        "mass-1d",
        "unit-mass field against cos(x) / cos(1) on one grid",
        include_str!("../presets/mass-1d.toml"),
    ),
    (
        "mass-plane-wave",
        "two-component massive field against plane waves, three grid levels",
        include_str!("../presets/mass-plane-wave.toml"),
    ),
    (
        "plane-wave-hj",
        "plane-wave Hamilton-Jacobi solution of the particle, straight reconstructed motions",
        include_str!("../presets/plane-wave-hj.toml"),
    ),
    (
        "radial-hj",
        "distance-function Hamilton-Jacobi solution of the particle and its rays",
        include_str!("../presets/radial-hj.toml"),
    ),
    (
        "scalar-symmetries",
        "translations, rotations and field rotations of the massive scalar field, with broken controls",
        include_str!("../presets/scalar-symmetries.toml"),
    ),
    (
        "sphere-cap",
        "spherical cap relaxing towards the flat disk on its rim",
        include_str!("../presets/sphere-cap.toml"),
    ),
    (
        "straight-line",
        "relativistic particle: 20 random worldlines, charges and the HJ cross-check",
        include_str!("../presets/straight-line.toml"),
    ),
    (
        "string-symmetries",
        "rigid motions of the Nambu-Goto string in four dimensions, scaling control",
        include_str!("../presets/string-symmetries.toml"),
    ),
];

const SCENARIOS: &[(&str, &str)] = &[
    ("check-symmetry", "infinitesimal and finite symmetry defects of generators"),
    ("field", "De Donder-Weyl grid solve, currents, continuity, action routes, flux"),
    ("hj-verify", "Hamilton-Jacobi residuals, curl, reconstructed motions, family charges"),
    ("particle", "worldline integration, line fit, charges, HJ cross-check"),
    ("string", "minimal-surface relaxation and curvature residuals"),
];

const MODELS: &[(&str, &str)] = &[
    ("scalar-field", "multicomponent scalar field H = P.I_x + sum |I_x.(P.e_a)|^2 / 2 + V"),
    ("string", "Nambu-Goto H = (|P|^2 - tension^2) / 2 in any motion dimension"),
];

const POTENTIALS: &[(&str, &str)] = &[
    ("anisotropic", "sum m_a^2 phi_a^2 / 2; breaks field rotations"),
    ("mass", "m^2 |phi|^2 / 2"),
    ("quartic", "m^2 |phi|^2 / 2 + g |phi|^4 / 4"),
    ("zero", "V = 0"),
];

const GENERATORS: &[(&str, &str)] = &[
    ("rotation", "rotation by an angle in a coordinate plane"),
    ("scaling", "stretch of one axis"),
    ("translation", "constant shift"),
];

const BOUNDARIES: &[(&str, &str)] = &[
    ("bumpy", "smooth data with no closed-form solution"),
    ("harmonic-square", "sin(pi x) sinh(pi y) / sinh(pi), zero potential"),
    ("mass-plane-wave", "cos(m (0.6 x + 0.8 y) + 0.3 + a) per component, mass potential"),
    ("mass1d", "cos(x) / cos(1), mass potential with m = 1"),
];

const MESHES: &[(&str, &str)] = &[
    ("catenoid", "cylinder between circles r = cosh a at z = +-a, refined and relaxed per level"),
    ("file", "JSON mesh: dim, vertices, faces, optional fixed flags"),
    ("flat-disk", "planar disk of radius 1"),
    ("sphere-cap", "unit-sphere cap up to polar angle theta_max"),
];

pub fn preset(name: &str) -> Option<ScenarioConfig> {
    PRESETS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, _, toml)| ScenarioConfig::from_toml_str(toml).expect("built-in presets are valid"))
}

/// Catalogue of presets and components, one line per entry.
pub fn list_presets() -> String {
    let sections: [(&str, Vec<(&str, &str)>); 7] = [
        ("presets", PRESETS.iter().map(|(n, d, _)| (*n, *d)).collect()),
        ("scenarios", SCENARIOS.to_vec()),
        ("models", MODELS.to_vec()),
        ("potentials", POTENTIALS.to_vec()),
        ("generators", GENERATORS.to_vec()),
        ("boundary presets", BOUNDARIES.to_vec()),
        ("mesh presets", MESHES.to_vec()),
    ];
    let mut out = String::new();
    for (title, entries) in sections {
        out.push_str(title);
        out.push_str(":\n");
        let width = entries.iter().map(|(n, _)| n.len()).max().unwrap_or(0);
        for (n, d) in entries {
            out.push_str(&format!("  {n:width$}  {d}\n"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse_and_are_sorted() {
        for w in PRESETS.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
        for (name, _, _) in PRESETS {
            assert_eq!(preset(name).unwrap().name, *name);
        }
        for list in [SCENARIOS, MODELS, POTENTIALS, GENERATORS, BOUNDARIES, MESHES] {
            assert!(list.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }

    #[test]
    fn listing_is_stable() {
        let text = list_presets();
        assert_eq!(text, list_presets());
        for name in ["straight-line", "catenoid", "harmonic-square"] {
            assert!(text.contains(name));
        }
    }
}
