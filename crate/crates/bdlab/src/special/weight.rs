//! The ramp weight `V(x) = R(delta (x - 1)) R(delta (b - x))`, where `R` is
//! the normalized integral of the bump rescaled to `[0, 1]`. `V` vanishes
//! outside `[1, b]`, equals 1 on `[1 + 1/delta, b - 1/delta]` and has
//! `V^(j) = O(delta^j)`.

use std::sync::{Arc, OnceLock};

use super::bump::{bump_u, bump_u_d1};
use super::dd::Dd;
use super::SpecialError;
use crate::quad::gauss_legendre;

pub const DEFAULT_NODES: usize = 2048;

/// `R` tabulated at `nodes + 1` equispaced points, interpolated by quintic
/// Hermite polynomials using the exact first and second derivatives.
#[derive(Debug)]
struct Ramp {
    values: Vec<f64>,
    norm: f64,
}

impl Ramp {
    fn build(nodes: usize) -> Ramp {
        let (gx, gw) = gauss_legendre(16);
        let h = 1.0 / nodes as f64;
        let mut cells = Vec::with_capacity(nodes);
        for i in 0..nodes {
            let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
            let c = 0.5 * (a + b);
            let s: f64 = gx.iter().zip(&gw).map(|(x, w)| w * bump_u(1.0 + c + 0.5 * h * x)).sum();
            cells.push(0.5 * h * s);
        }
        let mut acc = Dd::ZERO;
        let mut values = Vec::with_capacity(nodes + 1);
        values.push(0.0);
        for c in &cells {
            acc = acc.add_f64(*c);
            values.push(acc.to_f64());
        }
        let norm = acc.to_f64();
        for v in values.iter_mut() {
            *v /= norm;
        }
        Ramp { values, norm }
    }

    fn nodes(&self) -> usize {
        self.values.len() - 1
    }

    fn value(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let n = self.nodes();
        let h = 1.0 / n as f64;
        let pos = t * n as f64;
        let i = (pos as usize).min(n - 1);
        let u = pos - i as f64;
        let (t0, t1) = (i as f64 * h, (i + 1) as f64 * h);
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.d1(t0), self.d1(t1));
        let (s0, s1) = (self.d2(t0), self.d2(t1));
        let u2 = u * u;
        let u3 = u2 * u;
        let u4 = u3 * u;
        let u5 = u4 * u;
        let h0 = 1.0 - 10.0 * u3 + 15.0 * u4 - 6.0 * u5;
        let h1 = u - 6.0 * u3 + 8.0 * u4 - 3.0 * u5;
        let h2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
        let h3 = 0.5 * u3 - u4 + 0.5 * u5;
        let h4 = -4.0 * u3 + 7.0 * u4 - 3.0 * u5;
        let h5 = 10.0 * u3 - 15.0 * u4 + 6.0 * u5;
        y0 * h0 + h * d0 * h1 + h * h * s0 * h2 + h * h * s1 * h3 + h * d1 * h4 + y1 * h5
    }

    fn d1(&self, t: f64) -> f64 {
        bump_u(1.0 + t) / self.norm
    }

    fn d2(&self, t: f64) -> f64 {
        bump_u_d1(1.0 + t) / self.norm
    }
}

fn default_ramp() -> Arc<Ramp> {
    static RAMP: OnceLock<Arc<Ramp>> = OnceLock::new();
    RAMP.get_or_init(|| Arc::new(Ramp::build(DEFAULT_NODES))).clone()
}

#[derive(Clone, Debug)]
pub struct WeightV {
    delta: f64,
    right: f64,
    ramp: Arc<Ramp>,
}

/// Ramp weight on `[1, support_right]` with ramps of width `1/delta`.
pub fn make_weight_v(delta: f64, support_right: f64) -> Result<WeightV, SpecialError> {
    WeightV::with_nodes(delta, support_right, DEFAULT_NODES)
}

impl WeightV {
    /// As [`make_weight_v`] but with a ramp table of `nodes` cells; used to
    /// test sensitivity to the interpolation resolution.
    pub fn with_nodes(delta: f64, support_right: f64, nodes: usize) -> Result<WeightV, SpecialError> {
        if !(delta >= 2.0) {
            return Err(SpecialError::DeltaTooSmall(delta));
        }
        if !(support_right > 1.0 && support_right <= 2.0) {
            return Err(SpecialError::SupportOutOfRange(support_right));
        }
        let min_width = 2.0 / delta;
        if support_right - 1.0 < min_width * (1.0 - 1e-12) {
            return Err(SpecialError::SupportTooNarrow { right: support_right, min_width });
        }
        let ramp = if nodes == DEFAULT_NODES { default_ramp() } else { Arc::new(Ramp::build(nodes)) };
        Ok(WeightV { delta, right: support_right, ramp })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn support(&self) -> (f64, f64) {
        (1.0, self.right)
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 1.0 || x >= self.right {
            return 0.0;
        }
        self.ramp.value(self.delta * (x - 1.0)) * self.ramp.value(self.delta * (self.right - x))
    }

    pub fn d1(&self, x: f64) -> f64 {
        if x <= 1.0 || x >= self.right {
            return 0.0;
        }
        let (a, b) = (self.delta * (x - 1.0), self.delta * (self.right - x));
        self.delta * (self.ramp.d1(a) * self.ramp.value(b) - self.ramp.value(a) * self.ramp.d1(b))
    }

    pub fn d2(&self, x: f64) -> f64 {
        if x <= 1.0 || x >= self.right {
            return 0.0;
        }
        let (a, b) = (self.delta * (x - 1.0), self.delta * (self.right - x));
        let r = &self.ramp;
        self.delta
            * self.delta
            * (r.d2(a) * r.value(b) - 2.0 * r.d1(a) * r.d1(b) + r.value(a) * r.d2(b))
    }

    /// `integral |V'|` by Gauss–Legendre over the two ramps.
    pub fn total_variation(&self) -> f64 {
        let (gx, gw) = gauss_legendre(16);
        let pieces = 64;
        let mut total = 0.0;
        let w = 1.0 / self.delta;
        for (lo, hi) in [(1.0, 1.0 + w), (self.right - w, self.right)] {
            let h = (hi - lo) / pieces as f64;
            for i in 0..pieces {
                let c = lo + (i as f64 + 0.5) * h;
                total += gx.iter().zip(&gw).map(|(x, wt)| wt * self.d1(c + 0.5 * h * x).abs()).sum::<f64>() * 0.5 * h;
            }
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_middle_and_zero_ends() {
        let v = make_weight_v(10.0, 2.0).unwrap();
        assert_eq!(v.eval(1.0), 0.0);
        assert_eq!(v.eval(2.0), 0.0);
        assert_eq!(v.eval(1.5), 1.0);
    }

    #[test]
    fn ramp_is_symmetric() {
        let v = make_weight_v(4.0, 2.0).unwrap();
        for &x in &[1.01, 1.1, 1.2, 1.24] {
            let left = v.eval(x);
            let right = v.eval(3.0 - x);
            assert!((left - right).abs() < 1e-14);
        }
        // R(t) + R(1 - t) = 1 by symmetry of the bump
        let r = &v.ramp;
        for &t in &[0.1, 0.33, 0.5, 0.71] {
            assert!((r.value(t) + r.value(1.0 - t) - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(make_weight_v(1.0, 2.0).unwrap_err(), SpecialError::DeltaTooSmall(1.0));
        assert!(matches!(make_weight_v(10.0, 2.5), Err(SpecialError::SupportOutOfRange(_))));
        assert!(matches!(make_weight_v(10.0, 1.1), Err(SpecialError::SupportTooNarrow { .. })));
    }

    #[test]
    fn variation_is_two() {
        let v = make_weight_v(25.0, 1.7).unwrap();
        assert!((v.total_variation() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn derivatives_match_differences() {
        let v = make_weight_v(6.0, 2.0).unwrap();
        let h = 1e-6;
        for &x in &[1.05, 1.1, 1.9, 1.83] {
            let fd = (v.eval(x + h) - v.eval(x - h)) / (2.0 * h);
            assert!((fd - v.d1(x)).abs() < 1e-6, "x={x}: {fd} vs {}", v.d1(x));
        }
    }
}
