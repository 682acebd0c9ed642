//! Least-squares line fits in log-log coordinates.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest absolute deviation of a point from the line.
    pub max_residual: f64,
}

/// Ordinary least squares `y ≈ slope·x + intercept`.
pub fn ols(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { f64::NAN };
    let intercept = my - slope * mx;
    let max_residual = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    LineFit { slope, intercept, max_residual }
}

/// Fit of `log value` against `log delta`.
pub fn loglog(deltas: &[f64], values: &[f64]) -> LineFit {
    let xs: Vec<f64> = deltas.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    ols(&xs, &ys)
}

/// `count` geometric points from `hi` down to `lo`.
pub fn geometric_deltas(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let r = (lo / hi).ln() / (count - 1) as f64;
    (0..count).map(|k| hi * (r * k as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_power_law() {
        let d = geometric_deltas(1e-3, 1e-1, 12);
        assert!((d[0] - 1e-1).abs() < 1e-15 && (d[11] - 1e-3).abs() < 1e-15);
        let v: Vec<f64> = d.iter().map(|x| 7.0 * x.powf(-2.5)).collect();
        let fit = loglog(&d, &v);
        assert!((fit.slope + 2.5).abs() < 1e-12);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-10);
        assert!(fit.max_residual < 1e-12);
    }
}
