use alloc::vec::Vec;

/// Field-space potential `V(y)` with analytic derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum Potential {
    Zero,
    /// `½ m² Σ φ_a²`.
    Mass { m: f64 },
    /// `½ m² ρ + ¼ g ρ²` with `ρ = Σ φ_a²`.
    Quartic { m: f64, g: f64 },
    /// `½ Σ m_a² φ_a²`; breaks field-rotation symmetry when the masses differ.
    Anisotropic { masses: Vec<f64> },
}

impl Potential {
    pub fn value(&self, phi: &[f64]) -> f64 {
        let rho: f64 = phi.iter().map(|x| x * x).sum();
        match self {
            Potential::Zero => 0.0,
            Potential::Mass { m } => 0.5 * m * m * rho,
            Potential::Quartic { m, g } => 0.5 * m * m * rho + 0.25 * g * rho * rho,
            Potential::Anisotropic { masses } => phi
                .iter()
                .zip(masses)
                .map(|(x, m)| 0.5 * m * m * x * x)
                .sum(),
        }
    }

    /// `∂V/∂φ_a` for each component.
    pub fn gradient(&self, phi: &[f64]) -> Vec<f64> {
        let rho: f64 = phi.iter().map(|x| x * x).sum();
        phi.iter()
            .enumerate()
            .map(|(a, &x)| match self {
                Potential::Zero => 0.0,
                Potential::Mass { m } => m * m * x,
                Potential::Quartic { m, g } => (m * m + g * rho) * x,
                Potential::Anisotropic { masses } => masses.get(a).map_or(0.0, |m| m * m * x),
            })
            .collect()
    }

    /// `∂²V/∂φ_a²` for each component.
    pub fn curvature(&self, phi: &[f64]) -> Vec<f64> {
        let rho: f64 = phi.iter().map(|x| x * x).sum();
        phi.iter()
            .enumerate()
            .map(|(a, &x)| match self {
                Potential::Zero => 0.0,
                Potential::Mass { m } => m * m,
                Potential::Quartic { m, g } => m * m + g * rho + 2.0 * g * x * x,
                Potential::Anisotropic { masses } => masses.get(a).map_or(0.0, |m| m * m),
            })
            .collect()
    }

    /// Whether `V` depends on `y` only through `y²`.
    pub fn is_rotation_invariant(&self) -> bool {
        match self {
            Potential::Anisotropic { masses } => masses.windows(2).all(|w| w[0] == w[1]),
            _ => true,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Potential::Zero => "zero",
            Potential::Mass { .. } => "mass",
            Potential::Quartic { .. } => "quartic",
            Potential::Anisotropic { .. } => "anisotropic",
        }
    }
}
