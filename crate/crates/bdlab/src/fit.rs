//! Least-squares power-law fits used by every scaling check.

use serde::Serialize;

/// `y ~ C x^exponent` fitted by ordinary least squares in log-log space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerFit {
    pub exponent: f64,
    pub log_constant: f64,
    /// Standard error of the exponent; zero for two points.
    pub stderr: f64,
    /// Smallest and largest abscissa used.
    pub window: (f64, f64),
    pub points: usize,
}

impl PowerFit {
    pub fn within(&self, target: f64, tol: f64) -> bool {
        (self.exponent - target).abs() <= tol
    }
}

/// Fits `ln y = a + b ln x`. Points with non-positive `x` or `y` are skipped.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> PowerFit {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| **x > 0.0 && **y > 0.0 && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = pts.len();
    let window = xs
        .iter()
        .filter(|x| **x > 0.0)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
    if n < 2 {
        return PowerFit { exponent: f64::NAN, log_constant: f64::NAN, stderr: f64::NAN, window, points: n };
    }
    let nf = n as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let stderr = if n > 2 {
        let rss: f64 = pts.iter().map(|p| (p.1 - a - b * p.0).powi(2)).sum();
        (rss / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    PowerFit { exponent: b, log_constant: a, stderr, window, points: n }
}

/// Dyadic grid `start * 2^j` for `j = 0..count`.
pub fn dyadic(start: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| start * 2f64.powi(j as i32)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let xs = dyadic(10.0, 6);
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x.powf(-0.75)).collect();
        let f = fit_power_law(&xs, &ys);
        assert!((f.exponent + 0.75).abs() < 1e-12);
        assert!((f.log_constant - 3f64.ln()).abs() < 1e-12);
        assert!(f.stderr < 1e-12);
        assert_eq!(f.window, (10.0, 320.0));
    }
}
