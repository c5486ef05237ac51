//! JSON run configuration. Every section has defaults, so `{}` is a valid file.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::drift::{Drift, IntervalDrift};
use crate::error::{Error, Result};
use crate::montecarlo::GraphPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// `[−r, r]` with a membrane at 0, run as a two-edge graph.
    Interval,
    FiniteGraph,
    InfiniteGraph,
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Interval => "interval",
            Scenario::FiniteGraph => "finite_graph",
            Scenario::InfiniteGraph => "infinite_graph",
        }
    }
}

impl std::str::FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "interval" => Ok(Scenario::Interval),
            "finite_graph" | "finite" => Ok(Scenario::FiniteGraph),
            "infinite_graph" | "infinite" => Ok(Scenario::InfiniteGraph),
            _ => Err(Error::invalid(format!("unknown scenario {s:?}"))),
        }
    }
}

/// Test functions applied in convergence sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelFn {
    One,
    Linear,
    Quadratic,
    Cosine,
    EdgeIndicator,
}

impl PanelFn {
    pub const ALL: [PanelFn; 5] = [PanelFn::One, PanelFn::Linear, PanelFn::Quadratic, PanelFn::Cosine, PanelFn::EdgeIndicator];

    pub fn name(&self) -> &'static str {
        match self {
            PanelFn::One => "one",
            PanelFn::Linear => "linear",
            PanelFn::Quadratic => "quadratic",
            PanelFn::Cosine => "cosine",
            PanelFn::EdgeIndicator => "edge_indicator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalSetup {
    /// Weight of the right half.
    pub p: f64,
    pub drift: IntervalDrift,
    pub r: f64,
}

impl Default for IntervalSetup {
    fn default() -> Self {
        IntervalSetup { p: 0.8, drift: IntervalDrift::figure_one(), r: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSetup {
    pub p: Vec<f64>,
    pub drifts: Vec<Drift>,
    /// Edge length of the finite graph.
    pub r: f64,
    /// Sampling horizon of the infinite graph; defaults depend on `λ`.
    #[serde(default)]
    pub horizon: Option<f64>,
}

impl Default for GraphSetup {
    fn default() -> Self {
        GraphSetup {
            p: vec![0.5, 0.3, 0.2],
            drifts: vec![Drift::exp_decay(8.0, 8.0), Drift::exp_decay(-4.0, 8.0), Drift::exp_decay(4.0, 8.0)],
            r: 1.0,
            horizon: None,
        }
    }
}

/// An ε-sweep: `ε_m = eps0·factor^m` for `m < steps`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepSpec {
    pub lambdas: Vec<f64>,
    pub eps0: f64,
    pub factor: f64,
    pub steps: usize,
    /// Lower bound on subintervals per unit length; the drift resolution rule may ask for more.
    pub points_per_unit: usize,
    pub panel: Vec<PanelFn>,
    /// Required final error relative to `‖g‖`.
    pub tolerance: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec {
            lambdas: vec![0.5, 1.0, 2.0],
            eps0: 0.2,
            factor: 0.5,
            steps: 5,
            points_per_unit: 400,
            panel: PanelFn::ALL.to_vec(),
            tolerance: 0.01,
        }
    }
}

impl SweepSpec {
    pub fn ladder(&self) -> Vec<f64> {
        (0..self.steps).map(|m| self.eps0 * self.factor.powi(m as i32)).collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.lambdas.is_empty() || self.lambdas.iter().any(|l| !(*l > 0.0) || !l.is_finite()) {
            return Err(Error::invalid("sweep needs positive λ values"));
        }
        if !(self.eps0 > 0.0) || !(self.factor > 0.0 && self.factor < 1.0) || self.steps == 0 {
            return Err(Error::invalid("ε ladder must start positive and decrease"));
        }
        if self.panel.is_empty() {
            return Err(Error::invalid("empty test-function panel"));
        }
        if self.points_per_unit < 4 {
            return Err(Error::invalid("points_per_unit must be at least 4"));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::invalid("tolerance must be positive"));
        }
        Ok(())
    }
}

/// The `(x, k_ε(x))` table on the interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FigureSpec {
    pub lambda: f64,
    pub eps: Vec<f64>,
    /// Subintervals per half.
    pub n: usize,
}

impl Default for FigureSpec {
    fn default() -> Self {
        FigureSpec { lambda: 1.0, eps: vec![1.0, 0.5, 0.25, 0.125], n: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSetup {
    pub eps: f64,
    /// Defaults to the drift step bound, capped at `1e−4`.
    pub dt: Option<f64>,
    pub t: f64,
    pub n_paths: usize,
    /// Defaults to `3√Δt`.
    pub delta: Option<f64>,
    pub start: GraphPoint,
    /// Truncation radius on infinite graphs.
    pub truncation: Option<f64>,
}

impl Default for SimSetup {
    fn default() -> Self {
        SimSetup {
            eps: 0.01,
            dt: None,
            t: 1.0,
            n_paths: 100_000,
            delta: None,
            start: GraphPoint::center(),
            truncation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SemigroupSetup {
    pub t: f64,
    /// Power of two.
    pub n: usize,
    /// `None` runs the limit operator.
    pub eps: Option<f64>,
    pub function: PanelFn,
    pub points_per_unit: usize,
}

impl Default for SemigroupSetup {
    fn default() -> Self {
        SemigroupSetup { t: 0.5, n: 64, eps: None, function: PanelFn::Cosine, points_per_unit: 400 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LabConfig {
    pub seed: u64,
    pub scenario: Scenario,
    pub interval: IntervalSetup,
    pub graph: GraphSetup,
    pub sweep: SweepSpec,
    pub figure: FigureSpec,
    pub simulation: SimSetup,
    pub semigroup: SemigroupSetup,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            seed: 0,
            scenario: Scenario::Interval,
            interval: IntervalSetup::default(),
            graph: GraphSetup::default(),
            sweep: SweepSpec::default(),
            figure: FigureSpec::default(),
            simulation: SimSetup::default(),
            semigroup: SemigroupSetup::default(),
        }
    }
}

impl LabConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: LabConfig = serde_json::from_str(text)?;
        cfg.sweep.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::from(e).context(path.display().to_string()))?;
        Self::from_json(&text).map_err(|e| e.context(path.display().to_string()))
    }

    /// SHA-256 of the canonical JSON form, defaults included.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serialises");
        let digest = Sha256::digest(canonical.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
