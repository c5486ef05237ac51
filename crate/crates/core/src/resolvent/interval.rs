//! The interval `[−r, r]` with a membrane at 0, seen directly through its
//! Green kernel and as a two-edge star graph.
//!
//! Edge 0 of the graph is `x > 0`; edge 1 is `x < 0` traversed outwards, so
//! its drift is `x ↦ −a(−x)` and its weight is `1 − p`.

use super::finite::{build_finite_resolvent, limit_resolvent, FiniteResolvent};
use super::{LimitWeighting, Resolvent};
use crate::drift::{Drift, DriftFamily, IntervalDrift};
use crate::error::{Error, Result};
use crate::grid::{make_grid, EdgeFunctionVec, EdgeGrid, IntervalFunction, StarGraphSpec};
use crate::params::{transform_skew, SkewParams};
use crate::quadrature::{cumulative_integral, reverse_cumulative_integral};
use crate::sturm_liouville::IntervalSolution;

/// Interval data rewritten for the two-edge graph.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalAdapter {
    pub p: f64,
    pub drift: IntervalDrift,
}

impl IntervalAdapter {
    pub fn new(p: f64, drift: IntervalDrift) -> Result<Self> {
        SkewParams::from_p(p)?;
        drift.validate()?;
        Ok(IntervalAdapter { p, drift })
    }

    pub fn edge_drifts(&self) -> Vec<Drift> {
        vec![self.drift.right.clone(), self.drift.left.negated()]
    }

    pub fn family(&self, eps: f64) -> Result<DriftFamily> {
        DriftFamily::new(self.edge_drifts(), eps)
    }

    pub fn weights(&self) -> [f64; 2] {
        [self.p, 1.0 - self.p]
    }

    pub fn edge_alphas(&self) -> [f64; 2] {
        [self.drift.right.alpha(), -self.drift.left.alpha()]
    }

    /// `α = α_1 − α_2`.
    pub fn alpha(&self) -> f64 {
        let [a1, a2] = self.edge_alphas();
        a1 - a2
    }

    /// `γ = (1 − p)/p`, the derivative jump of the interval problem.
    pub fn gamma(&self) -> f64 {
        (1.0 - self.p) / self.p
    }

    pub fn limit_params(&self) -> Result<SkewParams> {
        transform_skew(self.p, self.alpha())
    }

    pub fn graph_grid(&self, r: f64, n: usize) -> Result<EdgeGrid> {
        make_grid(StarGraphSpec::finite(2, r)?, n)
    }

    /// ε-resolvent through the graph formula.
    pub fn graph_resolvent(&self, lambda: f64, eps: f64, r: f64, n: usize) -> Result<FiniteResolvent> {
        let grid = self.graph_grid(r, n)?;
        build_finite_resolvent(lambda, grid, &self.family(eps)?, &self.weights())
    }

    /// Limit resolvent through the graph formula.
    pub fn limit_resolvent(&self, lambda: f64, r: f64, n: usize) -> Result<FiniteResolvent> {
        let grid = self.graph_grid(r, n)?;
        let a = self.edge_alphas();
        limit_resolvent(lambda, grid, &a, &self.weights(), LimitWeighting::TransformedWeights)
    }
}

pub fn interval_to_graph(f: &IntervalFunction, grid: EdgeGrid) -> Result<EdgeFunctionVec> {
    if grid.k() != 2 || grid.n != f.n {
        return Err(Error::invalid("interval functions map onto two-edge grids of the same size"));
    }
    let left: Vec<f64> = f.left.iter().rev().copied().collect();
    EdgeFunctionVec::new(grid, vec![f.right.clone(), left])
}

pub fn graph_to_interval(f: &EdgeFunctionVec) -> Result<IntervalFunction> {
    if f.grid().k() != 2 {
        return Err(Error::invalid("only two-edge functions map onto the interval"));
    }
    let left: Vec<f64> = f.edge(1).iter().rev().copied().collect();
    IntervalFunction::new(f.grid().extent(), left, f.edge(0).to_vec())
}

/// Applies a graph resolvent to an interval function.
pub fn apply_on_interval(op: &dyn Resolvent, f: &IntervalFunction) -> Result<IntervalFunction> {
    graph_to_interval(&op.apply(&interval_to_graph(f, *op.grid())?)?)
}

fn interp(xs_start: f64, h: f64, v: &[f64], x: f64) -> f64 {
    let t = ((x - xs_start) / h).clamp(0.0, (v.len() - 1) as f64);
    let j = (t.floor() as usize).min(v.len() - 2);
    let u = t - j as f64;
    v[j] * (1.0 - u) + v[j + 1] * u
}

fn sample(f: &IntervalFunction, x: f64, right_side: bool) -> f64 {
    let h = f.h();
    if right_side {
        interp(0.0, h, &f.right, x)
    } else {
        interp(-f.r, h, &f.left, x)
    }
}

/// `K(x, y) = 2k(x∧y) ℓ(x∨y) / w(y)`, linearly interpolated between nodes;
/// points at 0 are read from the right half.
pub fn green_kernel_interval(sol: &IntervalSolution, x: f64, y: f64) -> Result<f64> {
    let r = sol.r();
    if x.abs() > r || y.abs() > r {
        return Err(Error::invalid(format!("({x}, {y}) outside [−{r}, {r}]²")));
    }
    let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
    let k = sample(&sol.k.f, lo, lo >= 0.0);
    let l = sample(&sol.ell.f, hi, hi >= 0.0);
    let w = sample(&sol.w, y, y >= 0.0);
    Ok(2.0 * k * l / w)
}

/// `R g(x) = 2ℓ(x)∫_{−r}^x kg/w + 2k(x)∫_x^r ℓg/w` with the two halves
/// integrated in sequence.
pub fn green_resolvent(sol: &IntervalSolution, g: &IntervalFunction) -> Result<IntervalFunction> {
    if g.n != sol.n() || (g.r - sol.r()).abs() > 1e-14 * g.r {
        return Err(Error::invalid("function does not live on the solution grid"));
    }
    let h = g.h();
    let n = g.n;
    let part = |u: &[f64], w: &[f64], v: &[f64]| -> Vec<f64> { (0..=n).map(|j| u[j] * v[j] / w[j]).collect() };
    let kl = part(&sol.k.f.left, &sol.w.left, &g.left);
    let kr = part(&sol.k.f.right, &sol.w.right, &g.right);
    let ll = part(&sol.ell.f.left, &sol.w.left, &g.left);
    let lr = part(&sol.ell.f.right, &sol.w.right, &g.right);
    let lower_l = cumulative_integral(&kl, h);
    let mut lower_r = cumulative_integral(&kr, h);
    lower_r.iter_mut().for_each(|v| *v += lower_l[n]);
    let upper_r = reverse_cumulative_integral(&lr, h);
    let mut upper_l = reverse_cumulative_integral(&ll, h);
    upper_l.iter_mut().for_each(|v| *v += upper_r[0]);
    let left = (0..=n).map(|j| 2.0 * (sol.ell.f.left[j] * lower_l[j] + sol.k.f.left[j] * upper_l[j])).collect();
    let right = (0..=n).map(|j| 2.0 * (sol.ell.f.right[j] * lower_r[j] + sol.k.f.right[j] * upper_r[j])).collect();
    IntervalFunction::new(g.r, left, right)
}
