//! Small fitting helpers used by convergence and straightness checks.

use alloc::vec::Vec;

/// Least-squares slope of `ln y` against `ln x`. Pairs with non-positive
/// entries are skipped; returns `None` with fewer than two usable pairs.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0)
        .map(|(x, y)| (libm::log(*x), libm::log(*y)))
        .collect();
    linear_slope(&pts)
}

fn linear_slope(pts: &[(f64, f64)]) -> Option<f64> {
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Observed convergence orders between successive refinement levels,
/// `ln(e_k / e_{k+1}) / ln(h_k / h_{k+1})`.
pub fn observed_orders(hs: &[f64], errors: &[f64]) -> Vec<f64> {
    hs.windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| libm::log(e[0] / e[1]) / libm::log(h[0] / h[1]))
        .collect()
}

/// Maximum distance of `points` (rows of equal length) from their total
/// least-squares line. The line passes through the centroid along the
/// dominant principal direction, found by power iteration on the scatter
/// matrix.
pub fn max_line_deviation(points: &[Vec<f64>]) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let dim = points[0].len();
    let n = points.len() as f64;
    let mut centroid = alloc::vec![0.0; dim];
    for p in points {
        for (c, x) in centroid.iter_mut().zip(p) {
            *c += x / n;
        }
    }
    let centered: Vec<Vec<f64>> = points
        .iter()
        .map(|p| p.iter().zip(&centroid).map(|(x, c)| x - c).collect())
        .collect();
    // start from the longest chord so power iteration converges immediately
    // for nearly collinear data
    let mut dir = centered
        .iter()
        .max_by(|a, b| norm(a).total_cmp(&norm(b)))
        .cloned()
        .unwrap_or_default();
    for _ in 0..50 {
        let mut next = alloc::vec![0.0; dim];
        for p in &centered {
            let d: f64 = p.iter().zip(&dir).map(|(a, b)| a * b).sum();
            for (nx, px) in next.iter_mut().zip(p) {
                *nx += d * px;
            }
        }
        let m = norm(&next);
        if m == 0.0 {
            return 0.0;
        }
        dir = next.into_iter().map(|x| x / m).collect();
    }
    centered
        .iter()
        .map(|p| {
            let along: f64 = p.iter().zip(&dir).map(|(a, b)| a * b).sum();
            libm::sqrt(p.iter().zip(&dir).map(|(x, d)| (x - along * d) * (x - along * d)).sum())
        })
        .fold(0.0, f64::max)
}

fn norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn slope_of_power_law() {
        let xs = [0.1, 0.2, 0.4, 0.8];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * libm::pow(*x, 4.0)).collect();
        assert!((log_log_slope(&xs, &ys).unwrap() - 4.0).abs() < 1e-12);
        assert!(log_log_slope(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn orders_between_levels() {
        let o = observed_orders(&[0.1, 0.05, 0.025], &[4e-2, 1e-2, 2.5e-3]);
        assert!(o.iter().all(|x| (x - 2.0).abs() < 1e-12));
    }

    #[test]
    fn line_deviation() {
        let pts: Vec<Vec<f64>> = (0..10).map(|k| vec![k as f64, 2.0 * k as f64, -1.0]).collect();
        assert!(max_line_deviation(&pts) < 1e-12);
        let mut bent = pts.clone();
        bent[5][2] += 0.5;
        assert!(max_line_deviation(&bent) > 0.1);
    }
}
