//! Drift profiles on a half-line, their ε-scaling, and the integrals built from them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{cumulative_integral, integrate};

fn one() -> f64 {
    1.0
}

/// A drift profile `a` on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Drift {
    Zero,
    /// `amplitude · e^{−rate·x}`.
    ExpDecay {
        #[serde(default = "one")]
        amplitude: f64,
        rate: f64,
    },
    /// Linear interpolation of `(x, a)`, zero outside the table.
    Table { x: Vec<f64>, a: Vec<f64> },
}

impl Drift {
    pub fn exp_decay(amplitude: f64, rate: f64) -> Self {
        Drift::ExpDecay { amplitude, rate }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Drift::Zero => Ok(()),
            Drift::ExpDecay { amplitude, rate } => {
                if !(*rate > 0.0) || !rate.is_finite() || !amplitude.is_finite() {
                    return Err(Error::invalid(format!(
                        "exp_decay needs a finite amplitude and a positive rate, got {amplitude}, {rate}"
                    )));
                }
                Ok(())
            }
            Drift::Table { x, a } => {
                if x.len() != a.len() || x.len() < 2 {
                    return Err(Error::invalid("drift table needs matching x/a columns with at least 2 rows"));
                }
                if x[0] < 0.0 || x.windows(2).any(|w| !(w[1] > w[0])) {
                    return Err(Error::invalid("drift table abscissae must be nonnegative and increasing"));
                }
                if a.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("drift table values must be finite"));
                }
                Ok(())
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Drift::Zero => true,
            Drift::ExpDecay { amplitude, .. } => *amplitude == 0.0,
            Drift::Table { a, .. } => a.iter().all(|v| *v == 0.0),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Drift::Zero => 0.0,
            Drift::ExpDecay { amplitude, rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    amplitude * (-rate * x).exp()
                }
            }
            Drift::Table { x: xs, a } => {
                if x < xs[0] || x > xs[xs.len() - 1] {
                    return 0.0;
                }
                let j = xs.partition_point(|&t| t <= x).clamp(1, xs.len() - 1);
                let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
                a[j - 1] + t * (a[j] - a[j - 1])
            }
        }
    }

    pub fn negated(&self) -> Drift {
        match self {
            Drift::Zero => Drift::Zero,
            Drift::ExpDecay { amplitude, rate } => Drift::ExpDecay { amplitude: -amplitude, rate: *rate },
            Drift::Table { x, a } => Drift::Table { x: x.clone(), a: a.iter().map(|v| -v).collect() },
        }
    }

    /// Scale on which the profile varies; grids must resolve a fraction of it.
    pub fn length_scale(&self) -> f64 {
        match self {
            Drift::Zero => f64::INFINITY,
            Drift::ExpDecay { rate, .. } => 1.0 / rate,
            Drift::Table { x, .. } => {
                let gap = x.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
                20.0 * gap
            }
        }
    }

    /// Point beyond which the profile is negligible (or vanishes).
    pub fn default_horizon(&self) -> f64 {
        match self {
            Drift::Zero => 1.0,
            Drift::ExpDecay { rate, .. } => 40.0 / rate,
            Drift::Table { x, .. } => x[x.len() - 1],
        }
    }

    /// `∫_0^{horizon} a` by composite Simpson.
    pub fn alpha_of(&self, horizon: f64) -> f64 {
        self.simpson(horizon, |v| v)
    }

    /// `∫_0^∞ |a|`, integrated up to the default horizon.
    pub fn abs_mass(&self) -> f64 {
        self.simpson(self.default_horizon(), f64::abs)
    }

    /// `∫_0^∞ a`, integrated up to the default horizon.
    pub fn alpha(&self) -> f64 {
        self.alpha_of(self.default_horizon())
    }

    fn simpson(&self, horizon: f64, map: impl Fn(f64) -> f64) -> f64 {
        if self.is_zero() || !(horizon > 0.0) {
            return 0.0;
        }
        let mut n = 20_000;
        if let Drift::Table { x, .. } = self {
            // put every knot on the grid when the table starts at 0
            n = n.max(40 * x.len());
        }
        let h = horizon / n as f64;
        let samples: Vec<f64> = (0..=n).map(|j| map(self.eval(j as f64 * h))).collect();
        integrate(&samples, h)
    }

    /// `∫_y^z a` for `0 ≤ y < z`.
    fn window(&self, y: f64, z: f64) -> f64 {
        match self {
            Drift::Zero => 0.0,
            Drift::ExpDecay { amplitude, rate } => {
                amplitude / rate * ((-rate * y).exp() - (-rate * z).exp())
            }
            Drift::Table { x, .. } => {
                let lo = y.max(x[0]);
                let hi = z.min(x[x.len() - 1]);
                if hi <= lo {
                    return 0.0;
                }
                let n = 4000;
                let h = (hi - lo) / n as f64;
                let samples: Vec<f64> = (0..=n).map(|j| self.eval(lo + j as f64 * h)).collect();
                integrate(&samples, h)
            }
        }
    }
}

/// `x ↦ ε^{−1} a(x/ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledDrift {
    pub base: Drift,
    pub eps: f64,
}

pub fn scale_drift(base: &Drift, eps: f64) -> Result<ScaledDrift> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::invalid(format!("ε must be positive, got {eps}")));
    }
    base.validate()?;
    Ok(ScaledDrift { base: base.clone(), eps })
}

impl ScaledDrift {
    pub fn eval(&self, x: f64) -> f64 {
        self.base.eval(x / self.eps) / self.eps
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn negated(&self) -> ScaledDrift {
        ScaledDrift { base: self.base.negated(), eps: self.eps }
    }

    /// `∫_0^∞ a_ε`, which does not depend on ε.
    pub fn alpha(&self) -> f64 {
        self.base.alpha()
    }

    pub fn abs_mass(&self) -> f64 {
        self.base.abs_mass()
    }

    /// Largest grid step that resolves the scaled profile.
    pub fn max_step(&self) -> f64 {
        self.eps * self.base.length_scale().min(1.0) / 20.0
    }

    /// `∫_y^z a_ε`, computed in the unscaled variable.
    pub fn window_integral(&self, y: f64, z: f64) -> Result<f64> {
        if !(y < z) {
            return Err(Error::invalid(format!("window needs y < z, got [{y}, {z}]")));
        }
        if z <= 0.0 {
            return Ok(0.0);
        }
        Ok(self.base.window(y.max(0.0) / self.eps, z / self.eps))
    }

    /// Samples `a_ε(j·h)`, `j = 0..=n`.
    pub fn sample(&self, h: f64, n: usize) -> Vec<f64> {
        (0..=n).map(|j| self.eval(j as f64 * h)).collect()
    }

    /// `𝔞(x_j) = 2∫_0^{x_j} a_ε` on the grid `x_j = j·h`.
    pub fn cumulative_exponent(&self, h: f64, n: usize) -> Result<Vec<f64>> {
        self.check_resolution(h)?;
        let mut out = cumulative_integral(&self.sample(h, n), h);
        out.iter_mut().for_each(|v| *v *= 2.0);
        Ok(out)
    }

    pub fn check_resolution(&self, h: f64) -> Result<()> {
        if self.is_zero() {
            return Ok(());
        }
        let max = self.max_step();
        if h > max * (1.0 + 1e-12) {
            return Err(Error::Resolution(format!(
                "grid step {h:.3e} too coarse for drift at ε={} (need ≤ {max:.3e})",
                self.eps
            )));
        }
        Ok(())
    }
}

/// Per-edge drift profiles sharing one ε.
#[derive(Debug, Clone, PartialEq)]
pub struct DriftFamily {
    pub edges: Vec<Drift>,
    pub eps: f64,
}

impl DriftFamily {
    pub fn new(edges: Vec<Drift>, eps: f64) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::invalid("drift family needs at least one edge"));
        }
        if !(eps > 0.0) {
            return Err(Error::invalid(format!("ε must be positive, got {eps}")));
        }
        for d in &edges {
            d.validate()?;
        }
        Ok(DriftFamily { edges, eps })
    }

    pub fn zero(k: usize) -> Self {
        DriftFamily { edges: vec![Drift::Zero; k], eps: 1.0 }
    }

    pub fn k(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, i: usize) -> ScaledDrift {
        ScaledDrift { base: self.edges[i].clone(), eps: self.eps }
    }

    pub fn with_eps(&self, eps: f64) -> Result<Self> {
        Self::new(self.edges.clone(), eps)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.edges.iter().map(Drift::alpha).collect()
    }

    /// `M = max_i ∫_0^∞ |a_i|`.
    pub fn mass_bound(&self) -> f64 {
        self.edges.iter().map(Drift::abs_mass).fold(0.0, f64::max)
    }

    /// Largest step resolving every edge.
    pub fn max_step(&self) -> f64 {
        (0..self.k()).map(|i| self.edge(i).max_step()).fold(f64::INFINITY, f64::min)
    }
}

/// A drift on the whole line: `a(x) = right(x)` for `x ≥ 0`, `a(x) = left(−x)` for `x < 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalDrift {
    pub left: Drift,
    pub right: Drift,
}

impl IntervalDrift {
    pub fn zero() -> Self {
        IntervalDrift { left: Drift::Zero, right: Drift::Zero }
    }

    /// The profile `e^{x/2}` on `x < 0` and `e^{−5x}` on `x ≥ 0`.
    pub fn figure_one() -> Self {
        IntervalDrift { left: Drift::exp_decay(1.0, 0.5), right: Drift::exp_decay(1.0, 5.0) }
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left.eval(-x)
        } else {
            self.right.eval(x)
        }
    }

    /// `∫_ℝ a`.
    pub fn alpha(&self) -> f64 {
        self.left.alpha() + self.right.alpha()
    }

    /// `∫_ℝ |a|`.
    pub fn abs_mass(&self) -> f64 {
        self.left.abs_mass() + self.right.abs_mass()
    }

    pub fn scaled(&self, eps: f64) -> Result<ScaledIntervalDrift> {
        Ok(ScaledIntervalDrift { left: scale_drift(&self.left, eps)?, right: scale_drift(&self.right, eps)? })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScaledIntervalDrift {
    /// Profile for `x < 0`, evaluated at `−x`.
    pub left: ScaledDrift,
    pub right: ScaledDrift,
}

impl ScaledIntervalDrift {
    pub fn eps(&self) -> f64 {
        self.right.eps
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            self.left.eval(-x)
        } else {
            self.right.eval(x)
        }
    }

    pub fn abs_mass(&self) -> f64 {
        self.left.abs_mass() + self.right.abs_mass()
    }

    pub fn is_zero(&self) -> bool {
        self.left.is_zero() && self.right.is_zero()
    }

    pub fn check_resolution(&self, h: f64) -> Result<()> {
        self.left.check_resolution(h)?;
        self.right.check_resolution(h)
    }

    pub fn max_step(&self) -> f64 {
        self.left.max_step().min(self.right.max_step())
    }
}
