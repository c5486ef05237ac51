//! Turns a configuration into grids and resolvents for one scenario.

use crate::drift::{Drift, DriftFamily};
use crate::error::{Error, Result};
use crate::grid::{make_grid, EdgeFunctionVec, EdgeGrid, StarGraphSpec};
use crate::params::transform_walsh;
use crate::resolvent::finite::{build_finite_resolvent, limit_resolvent};
use crate::resolvent::infinite::{build_infinite_resolvent, limit_resolvent_inf};
use crate::resolvent::interval::IntervalAdapter;
use crate::resolvent::{LimitWeighting, Resolvent};
use crate::sturm_liouville::default_halfline_horizon;

use super::config::{LabConfig, PanelFn, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub scenario: Scenario,
    pub drifts: Vec<Drift>,
    pub p: Vec<f64>,
    /// Edge length on finite scenarios.
    pub r: f64,
    pub horizon: Option<f64>,
}

impl Model {
    pub fn from_config(cfg: &LabConfig) -> Result<Model> {
        Self::for_scenario(cfg, cfg.scenario)
    }

    pub fn for_scenario(cfg: &LabConfig, scenario: Scenario) -> Result<Model> {
        let model = match scenario {
            Scenario::Interval => {
                let s = &cfg.interval;
                let adapter = IntervalAdapter::new(s.p, s.drift.clone())?;
                Model {
                    scenario,
                    drifts: adapter.edge_drifts(),
                    p: adapter.weights().to_vec(),
                    r: s.r,
                    horizon: None,
                }
            }
            Scenario::FiniteGraph | Scenario::InfiniteGraph => {
                let g = &cfg.graph;
                Model { scenario, drifts: g.drifts.clone(), p: g.p.clone(), r: g.r, horizon: g.horizon }
            }
        };
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        crate::resolvent::check_weights(&self.p, self.k())?;
        if self.drifts.len() != self.k() {
            return Err(Error::invalid(format!("{} drifts for {} weights", self.drifts.len(), self.k())));
        }
        self.drifts.iter().try_for_each(Drift::validate)?;
        if !(self.r > 0.0) || !self.r.is_finite() {
            return Err(Error::invalid(format!("edge length must be positive, got {}", self.r)));
        }
        if let Some(h) = self.horizon {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::invalid(format!("horizon must be positive, got {h}")));
            }
        }
        Ok(())
    }

    pub fn k(&self) -> usize {
        self.p.len()
    }

    pub fn is_infinite(&self) -> bool {
        self.scenario == Scenario::InfiniteGraph
    }

    pub fn family(&self, eps: f64) -> Result<DriftFamily> {
        DriftFamily::new(self.drifts.clone(), eps)
    }

    pub fn alphas(&self) -> Vec<f64> {
        self.drifts.iter().map(Drift::alpha).collect()
    }

    /// Edge probabilities of the limit process.
    pub fn p_tilde(&self) -> Result<Vec<f64>> {
        transform_walsh(&self.p, &self.alphas())
    }

    pub fn horizon_at(&self, lambda: f64) -> f64 {
        let mass = self.drifts.iter().map(Drift::abs_mass).fold(0.0, f64::max);
        self.horizon.unwrap_or_else(|| default_halfline_horizon(lambda, mass))
    }

    pub fn spec_at(&self, lambda: f64) -> Result<StarGraphSpec> {
        if self.is_infinite() {
            StarGraphSpec::infinite(self.k(), self.horizon_at(lambda))
        } else {
            StarGraphSpec::finite(self.k(), self.r)
        }
    }

    /// Grid resolving the drift at `eps` (`h ≤ ε·min(1, L)/20`) and never
    /// coarser than `points_per_unit` subintervals per unit length.
    pub fn grid(&self, lambda: f64, eps: Option<f64>, points_per_unit: usize) -> Result<EdgeGrid> {
        let spec = self.spec_at(lambda)?;
        let mut n = ((spec.extent() * points_per_unit as f64).ceil() as usize).max(4);
        if let Some(eps) = eps {
            if self.drifts.iter().any(|d| !d.is_zero()) {
                let step = self.family(eps)?.max_step();
                n = n.max((spec.extent() / step).ceil() as usize);
            }
        }
        make_grid(spec, n)
    }

    /// `R_{λ,ε}` on `grid`, or the limit operator when `eps` is `None`.
    pub fn resolvent(&self, lambda: f64, eps: Option<f64>, grid: EdgeGrid) -> Result<Box<dyn Resolvent>> {
        match (eps, self.is_infinite()) {
            (Some(e), false) => Ok(Box::new(build_finite_resolvent(lambda, grid, &self.family(e)?, &self.p)?)),
            (Some(e), true) => Ok(Box::new(build_infinite_resolvent(lambda, grid, &self.family(e)?, &self.p)?)),
            (None, false) => Ok(Box::new(limit_resolvent(
                lambda,
                grid,
                &self.alphas(),
                &self.p,
                LimitWeighting::TransformedWeights,
            )?)),
            (None, true) => Ok(Box::new(limit_resolvent_inf(
                lambda,
                grid,
                &self.alphas(),
                &self.p,
                LimitWeighting::TransformedWeights,
            )?)),
        }
    }

    /// Samples a panel function; infinite edges carry their limits.
    pub fn panel_function(&self, f: PanelFn, grid: EdgeGrid) -> Result<EdgeFunctionVec> {
        if self.is_infinite() {
            let v = EdgeFunctionVec::from_fn(grid, |i, x| panel_infinite(f, i, x))?;
            let limits = (0..grid.k()).map(|i| panel_infinite_limit(f, i)).collect();
            EdgeFunctionVec::with_limits(grid, v.into_edges(), Some(limits))
        } else {
            let r = grid.extent();
            EdgeFunctionVec::from_fn(grid, |i, x| panel_finite(f, i, x, r))
        }
    }
}

/// Panel on edges of length `r`; every member is continuous at the center.
pub fn panel_finite(f: PanelFn, edge: usize, x: f64, r: f64) -> f64 {
    let u = x / r;
    match f {
        PanelFn::One => 1.0,
        PanelFn::Linear => u,
        PanelFn::Quadratic => u * u,
        PanelFn::Cosine => (std::f64::consts::PI * u).cos(),
        PanelFn::EdgeIndicator => {
            if edge == 0 {
                (0.5 * std::f64::consts::PI * u).sin().powi(2)
            } else {
                0.0
            }
        }
    }
}

/// Panel on half-lines, each member converging at infinity.
pub fn panel_infinite(f: PanelFn, edge: usize, x: f64) -> f64 {
    match f {
        PanelFn::One => 1.0,
        PanelFn::Linear => -(-x).exp_m1(),
        PanelFn::Quadratic => x * (-x).exp(),
        PanelFn::Cosine => (-x).exp() * (std::f64::consts::PI * x).cos(),
        PanelFn::EdgeIndicator => {
            if edge == 0 {
                (-x).exp_m1().powi(2)
            } else {
                0.0
            }
        }
    }
}

pub fn panel_infinite_limit(f: PanelFn, edge: usize) -> f64 {
    match f {
        PanelFn::One | PanelFn::Linear => 1.0,
        PanelFn::EdgeIndicator if edge == 0 => 1.0,
        _ => 0.0,
    }
}
