//! Phases `f(x) = T phi(x/N) + gamma x` and their pairing with a weight.

use serde::Serialize;

use super::PipelineError;
use crate::special::dd::Dd;
use crate::special::WeightV;

/// The shape function `phi`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Phi {
    /// `phi(x) = -log x`.
    NegLog,
    /// `phi(x) = sign * x^beta`, `beta` not 0 or 1, `sign = +-1`.
    Power { beta: f64, sign: f64 },
}

impl Phi {
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            Phi::NegLog => -x.ln(),
            Phi::Power { beta, sign } => sign * x.powf(beta),
        }
    }

    #[inline]
    pub fn d1(&self, x: f64) -> f64 {
        match *self {
            Phi::NegLog => -1.0 / x,
            Phi::Power { beta, sign } => sign * beta * x.powf(beta - 1.0),
        }
    }

    #[inline]
    pub fn d2(&self, x: f64) -> f64 {
        match *self {
            Phi::NegLog => 1.0 / (x * x),
            Phi::Power { beta, sign } => sign * beta * (beta - 1.0) * x.powf(beta - 2.0),
        }
    }

    /// `min |phi''|` on `[1/2, 5/2]` in closed form: `4/25` for `-log`, and
    /// `|beta (beta - 1)| min(2^{2-beta}, (5/2)^{beta-2})` for powers.
    pub fn c0(&self) -> f64 {
        match *self {
            Phi::NegLog => 4.0 / 25.0,
            Phi::Power { beta, .. } => (beta * (beta - 1.0)).abs() * 0.5f64.powf(beta - 2.0).min(2.5f64.powf(beta - 2.0)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseSpec {
    pub t: f64,
    pub gamma: f64,
    pub n: f64,
    pub phi: Phi,
}

impl PhaseSpec {
    /// Validates the parameters. For `T > 0` the bound `|phi''| >= c0` is
    /// confirmed on 1001 samples of `[1/2, 5/2]`. `T = 0` gives the linear
    /// phase `gamma x`.
    pub fn new(t: f64, gamma: f64, n: f64, phi: Phi) -> Result<Self, PipelineError> {
        if !(t == 0.0 || t >= 1.0) || !(n >= 1.0) || !gamma.is_finite() {
            return Err(PipelineError::Config(format!("phase needs T = 0 or T >= 1 and N >= 1; got T = {t}, N = {n}")));
        }
        if let Phi::Power { beta, sign } = phi {
            if beta == 0.0 || beta == 1.0 || sign.abs() != 1.0 {
                return Err(PipelineError::Config(format!("power phase needs beta not in {{0, 1}} and sign +-1; got beta = {beta}, sign = {sign}")));
            }
        }
        if t > 0.0 {
            let c0 = phi.c0();
            for i in 0..=1000 {
                let x = 0.5 + 2.0 * i as f64 / 1000.0;
                if phi.d2(x).abs() < c0 * (1.0 - 1e-12) {
                    return Err(PipelineError::Config(format!("|phi''({x})| = {} below c0 = {c0}", phi.d2(x).abs())));
                }
            }
        }
        Ok(PhaseSpec { t, gamma, n, phi })
    }

    /// `f(m)` reduced mod 1, with `gamma m` and `T phi(m/N)` multiplied out in
    /// double-double so that large `m gamma` keeps its fractional part.
    #[inline]
    pub fn phase_mod1(&self, m: f64) -> f64 {
        let lin = Dd::prod(self.gamma, m);
        let curve = Dd::prod(self.t, self.phi.eval(m / self.n));
        (lin + curve).frac_centered()
    }

    /// `f(x)` in plain double precision.
    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        self.t * self.phi.eval(x / self.n) + self.gamma * x
    }
}

/// A phase together with a weight `V`, checked against `N^eps Delta <= T`.
#[derive(Clone, Debug)]
pub struct WeightedPhase {
    pub phase: PhaseSpec,
    pub v: WeightV,
}

impl WeightedPhase {
    pub fn new(phase: PhaseSpec, v: WeightV, epsilon: f64) -> Result<Self, PipelineError> {
        let lhs = phase.n.powf(epsilon) * v.delta();
        if lhs > phase.t {
            return Err(PipelineError::Hypothesis(format!(
                "N^eps Delta <= T fails: N^{epsilon} * {} = {lhs} > T = {}",
                v.delta(),
                phase.t
            )));
        }
        Ok(WeightedPhase { phase, v })
    }

    /// Skips the `Delta` condition; for phase-free sanity sums.
    pub fn unchecked(phase: PhaseSpec, v: WeightV) -> Self {
        WeightedPhase { phase, v }
    }
}
