use alloc::vec::Vec;

use super::mesh::SurfaceMesh;
use crate::stats::log_log_slope;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitRow {
    pub eps: f64,
    /// `Λ · area` of the graph mesh.
    pub string_action: f64,
    /// `Λ (A_SF|_{V=0} + vol Ω)` on the same mesh.
    pub scalar_action: f64,
}

impl LimitRow {
    pub fn difference(&self) -> f64 {
        (self.string_action - self.scalar_action).abs()
    }

    pub fn relative(&self) -> f64 {
        self.difference() / self.string_action.abs()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    /// Log-log slope of the difference against `ε` over rows with nonzero
    /// difference.
    pub exponent: Option<f64>,
}

/// Compares the Nambu-Goto action of the graph `y = ε g(x)` over the unit
/// square with the massless scalar-field action plus the flat volume.
///
/// Both use one piecewise-linear graph mesh with `cells × cells` squares,
/// so the difference is exactly the quartic and higher terms of
/// `√(1 + |∇φ|²) − 1 − ½|∇φ|²`.
pub fn string_to_scalar_limit(
    tension: f64,
    cells: usize,
    eps: &[f64],
    g: impl Fn(f64, f64) -> f64,
) -> Result<LimitReport> {
    if !(tension > 0.0) {
        return Err(Error::Invalid("tension must be positive"));
    }
    let mut rows = Vec::with_capacity(eps.len());
    for &e in eps {
        let mesh = SurfaceMesh::graph(cells, 1, |x, y| alloc::vec![e * g(x, y)])?;
        let string_action = tension * mesh.total_area();
        let mut scalar = 0.0;
        let mut volume = 0.0;
        for &[a, b, c] in mesh.faces() {
            let (pa, pb, pc) = (mesh.vertex(a), mesh.vertex(b), mesh.vertex(c));
            let (ux, uy, uf) = (pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]);
            let (wx, wy, wf) = (pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]);
            let det = ux * wy - uy * wx;
            let flat = 0.5 * det.abs();
            // ∇φ from φ(b) − φ(a) = ∇φ·u, φ(c) − φ(a) = ∇φ·w
            let gx = (uf * wy - wf * uy) / det;
            let gy = (ux * wf - wx * uf) / det;
            scalar += flat * 0.5 * (gx * gx + gy * gy);
            volume += flat;
        }
        rows.push(LimitRow {
            eps: e,
            string_action,
            scalar_action: tension * (scalar + volume),
        });
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = rows
        .iter()
        .filter(|r| r.eps > 0.0 && r.difference() > 0.0)
        .map(|r| (r.eps, r.difference()))
        .unzip();
    Ok(LimitReport {
        exponent: log_log_slope(&xs, &ys),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn bump(x: f64, y: f64) -> f64 {
        libm::sin(PI * x) * libm::sin(PI * y)
    }

    #[test]
    fn flat_sheet_has_no_difference() {
        let r = string_to_scalar_limit(2.0, 8, &[0.0], bump).unwrap();
        assert!(r.rows[0].difference() < 1e-14);
        assert!((r.rows[0].string_action - 2.0).abs() < 1e-14);
        assert!(r.exponent.is_none());
    }

    #[test]
    fn small_amplitude_agreement_and_quartic_scaling() {
        let r = string_to_scalar_limit(1.0, 32, &[0.05], bump).unwrap();
        assert!(r.rows[0].relative() < 1e-3);
        let r = string_to_scalar_limit(1.0, 32, &[0.02, 0.04, 0.08, 0.16], bump).unwrap();
        let p = r.exponent.unwrap();
        assert!(p >= 3.5, "{p}");
    }
}
