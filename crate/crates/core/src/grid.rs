//! Star graphs, their uniform grids, and functions sampled on them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Length of every edge of a star graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EdgeLength {
    Finite { r: f64 },
    /// Unbounded rays, sampled on `[0, horizon]`.
    Infinite { horizon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarGraphSpec {
    pub k: usize,
    pub length: EdgeLength,
}

impl StarGraphSpec {
    pub fn finite(k: usize, r: f64) -> Result<Self> {
        let spec = StarGraphSpec { k, length: EdgeLength::Finite { r } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn infinite(k: usize, horizon: f64) -> Result<Self> {
        let spec = StarGraphSpec { k, length: EdgeLength::Infinite { horizon } };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("a star graph needs at least one edge"));
        }
        let ext = self.extent();
        if !(ext > 0.0) || !ext.is_finite() {
            return Err(Error::invalid(format!("edge extent must be positive and finite, got {ext}")));
        }
        Ok(())
    }

    /// `r` for finite edges, the sampling horizon otherwise.
    pub fn extent(&self) -> f64 {
        match self.length {
            EdgeLength::Finite { r } => r,
            EdgeLength::Infinite { horizon } => horizon,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self.length, EdgeLength::Infinite { .. })
    }
}

/// The same uniform partition `0 = x_0 < … < x_n` on every edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeGrid {
    pub spec: StarGraphSpec,
    pub n: usize,
    pub h: f64,
}

pub fn make_grid(spec: StarGraphSpec, n: usize) -> Result<EdgeGrid> {
    spec.validate()?;
    if n < 2 {
        return Err(Error::invalid(format!("need at least 2 subintervals per edge, got {n}")));
    }
    Ok(EdgeGrid { spec, n, h: spec.extent() / n as f64 })
}

impl EdgeGrid {
    pub fn k(&self) -> usize {
        self.spec.k
    }

    pub fn extent(&self) -> f64 {
        self.spec.extent()
    }

    pub fn len(&self) -> usize {
        self.n + 1
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.n {
            self.extent()
        } else {
            j as f64 * self.h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..=self.n).map(|j| self.x(j)).collect()
    }

    /// Same graph with `k` replaced.
    pub fn with_k(&self, k: usize) -> EdgeGrid {
        EdgeGrid { spec: StarGraphSpec { k, ..self.spec }, ..*self }
    }

    fn same_as(&self, other: &EdgeGrid) -> bool {
        self.spec.k == other.spec.k && self.n == other.n && (self.h - other.h).abs() <= 1e-14 * self.h
    }
}

/// Relative tolerance for the shared center value.
const CENTER_TOL: f64 = 1e-9;

/// A function on a star graph: one sample array per edge, sharing the
/// value at the center. On infinite graphs the limit at infinity of each
/// edge can be recorded as well.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeFunctionVec {
    grid: EdgeGrid,
    values: Vec<Vec<f64>>,
    limits: Option<Vec<f64>>,
}

impl EdgeFunctionVec {
    pub fn new(grid: EdgeGrid, values: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_limits(grid, values, None)
    }

    pub fn with_limits(grid: EdgeGrid, values: Vec<Vec<f64>>, limits: Option<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.k() {
            return Err(Error::invalid(format!("expected {} edges, got {}", grid.k(), values.len())));
        }
        if let Some(bad) = values.iter().position(|v| v.len() != grid.len()) {
            return Err(Error::invalid(format!(
                "edge {bad} has {} samples, grid has {}",
                values[bad].len(),
                grid.len()
            )));
        }
        if let Some(l) = &limits {
            if l.len() != grid.k() {
                return Err(Error::invalid("one limit per edge is required"));
            }
        }
        let c = values[0][0];
        for (i, v) in values.iter().enumerate() {
            if (v[0] - c).abs() > CENTER_TOL * c.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "center value differs between edge 0 ({c}) and edge {i} ({})",
                    v[0]
                )));
            }
        }
        Ok(EdgeFunctionVec { grid, values, limits })
    }

    /// Samples `f(edge, x)`; on infinite graphs the limits are taken from `limit(edge)`.
    pub fn from_fn(grid: EdgeGrid, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        let values = (0..grid.k())
            .map(|i| (0..=grid.n).map(|j| f(i, grid.x(j))).collect())
            .collect();
        Self::new(grid, values)
    }

    pub fn constant(grid: EdgeGrid, c: f64) -> Self {
        let limits = grid.spec.is_infinite().then(|| vec![c; grid.k()]);
        EdgeFunctionVec { grid, values: vec![vec![c; grid.len()]; grid.k()], limits }
    }

    pub fn zeros(grid: EdgeGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn grid(&self) -> &EdgeGrid {
        &self.grid
    }

    pub fn edge(&self, i: usize) -> &[f64] {
        &self.values[i]
    }

    pub fn edges(&self) -> &[Vec<f64>] {
        &self.values
    }

    pub fn into_edges(self) -> Vec<Vec<f64>> {
        self.values
    }

    pub fn limits(&self) -> Option<&[f64]> {
        self.limits.as_deref()
    }

    /// Limit at infinity of edge `i`; falls back to the last sample.
    pub fn limit(&self, i: usize) -> f64 {
        match &self.limits {
            Some(l) => l[i],
            None => *self.values[i].last().unwrap(),
        }
    }

    pub fn center(&self) -> f64 {
        self.values[0][0]
    }

    pub fn sup_norm(&self) -> f64 {
        let nodes = self.values.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        let lim = self.limits.iter().flatten().fold(0.0_f64, |m, v| m.max(v.abs()));
        nodes.max(lim)
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().flatten().fold(f64::INFINITY, |m, &v| m.min(v))
    }

    /// Elementwise `a·self + b·other`.
    pub fn axpby(&self, a: f64, other: &EdgeFunctionVec, b: f64) -> Result<EdgeFunctionVec> {
        check_same_grid(&self.grid, &other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| u.iter().zip(v).map(|(x, y)| a * x + b * y).collect())
            .collect();
        let limits = match (&self.limits, &other.limits) {
            (Some(u), Some(v)) => Some(u.iter().zip(v).map(|(x, y)| a * x + b * y).collect()),
            _ => None,
        };
        Ok(EdgeFunctionVec { grid: self.grid, values, limits })
    }

    pub fn scale(&self, a: f64) -> EdgeFunctionVec {
        EdgeFunctionVec {
            grid: self.grid,
            values: self.values.iter().map(|v| v.iter().map(|x| a * x).collect()).collect(),
            limits: self.limits.as_ref().map(|l| l.iter().map(|x| a * x).collect()),
        }
    }

    /// Second-order one-sided derivative on edge `i` at node `j`.
    pub fn derivative(&self, i: usize, j: usize, side: Side) -> Result<f64> {
        one_sided_derivative(&self.values[i], self.grid.h, j, side)
    }
}

fn check_same_grid(a: &EdgeGrid, b: &EdgeGrid) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "grid mismatch: k={} n={} vs k={} n={}",
            a.k(),
            a.n,
            b.k(),
            b.n
        )))
    }
}

/// `max_{i,j} |f_i(x_j) − g_i(x_j)|`.
pub fn sup_distance(f: &EdgeFunctionVec, g: &EdgeFunctionVec) -> Result<f64> {
    check_same_grid(&f.grid, &g.grid)?;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .flat_map(|(u, v)| u.iter().zip(v).map(|(a, b)| (a - b).abs()))
        .fold(0.0, f64::max))
}

/// A function on `[−r, r]` with the node at 0 stored twice.
///
/// `left[j]` samples `x = −r + j·h` (so `left[n]` is `f(0−)`), `right[j]`
/// samples `x = j·h` (so `right[0]` is `f(0+)`).
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalFunction {
    pub r: f64,
    pub n: usize,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl IntervalFunction {
    pub fn new(r: f64, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::invalid(format!("half-width must be positive, got {r}")));
        }
        if left.len() != right.len() || left.len() < 3 {
            return Err(Error::invalid("left and right halves need equal lengths of at least 3"));
        }
        Ok(IntervalFunction { r, n: left.len() - 1, left, right })
    }

    pub fn from_fn(r: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = r / n as f64;
        let left = (0..=n).map(|j| if j == n { f(-0.0) } else { f(-r + j as f64 * h) }).collect();
        let right = (0..=n).map(|j| if j == n { f(r) } else { f(j as f64 * h) }).collect();
        Self::new(r, left, right)
    }

    pub fn h(&self) -> f64 {
        self.r / self.n as f64
    }

    pub fn x_left(&self, j: usize) -> f64 {
        if j == 0 {
            -self.r
        } else {
            -self.r + j as f64 * self.h()
        }
    }

    pub fn x_right(&self, j: usize) -> f64 {
        if j == self.n {
            self.r
        } else {
            j as f64 * self.h()
        }
    }

    /// `max e^{−ω(x+r)} |f(x)|` over all nodes.
    pub fn bielecki_norm(&self, omega: f64) -> f64 {
        let h = self.h();
        let l = bielecki_norm(&self.left, h, omega);
        let shift = (-omega * self.r).exp();
        let rt = self
            .right
            .iter()
            .enumerate()
            .fold(0.0_f64, |m, (j, v)| m.max((-omega * j as f64 * h).exp() * v.abs()));
        l.max(shift * rt)
    }

    pub fn sup_norm(&self) -> f64 {
        self.left.iter().chain(&self.right).fold(0.0, |m, v| m.max(v.abs()))
    }

    /// One-sided derivative at 0 from the chosen half.
    pub fn derivative_at_zero(&self, side: Side) -> Result<f64> {
        match side {
            Side::Plus => one_sided_derivative(&self.right, self.h(), 0, Side::Plus),
            Side::Minus => one_sided_derivative(&self.left, self.h(), self.n, Side::Minus),
        }
    }
}

/// `max_j e^{−ω x_j} |f(x_j)|` with `x_j = j·h`.
pub fn bielecki_norm(f: &[f64], h: f64, omega: f64) -> f64 {
    let step = (-omega * h).exp();
    let mut weight = 1.0;
    let mut m = 0.0_f64;
    for v in f {
        m = m.max(weight * v.abs());
        weight *= step;
    }
    m
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

/// Three-point one-sided difference at node `j`, using nodes `j, j±1, j±2`.
pub fn one_sided_derivative(f: &[f64], h: f64, j: usize, side: Side) -> Result<f64> {
    match side {
        Side::Plus => {
            if j + 2 >= f.len() {
                return Err(Error::invalid(format!("need two nodes right of {j}")));
            }
            Ok((-3.0 * f[j] + 4.0 * f[j + 1] - f[j + 2]) / (2.0 * h))
        }
        Side::Minus => {
            if j < 2 || j >= f.len() {
                return Err(Error::invalid(format!("need two nodes left of {j}")));
            }
            Ok((3.0 * f[j] - 4.0 * f[j - 1] + f[j - 2]) / (2.0 * h))
        }
    }
}
