//! Resolvents on the star graph with infinite edges.
//!
//! Functions carry samples on `[0, X]` and a limit at infinity. Integrals
//! past `X` are closed with exponential envelopes: `ℓ e^{𝔞}` decays at the
//! rate it has at `X`, and the drift has died out by then.

use rayon::prelude::*;

use super::{check_lambda, check_weights, vertex_coefficient, LimitWeighting, Resolvent, ResolventKind};
use crate::drift::DriftFamily;
use crate::error::{Error, Result};
use crate::grid::{EdgeFunctionVec, EdgeGrid};
use crate::params::transform_walsh;
use crate::quadrature::{cumulative_integral, exp_convolve_backward, exp_convolve_forward, reverse_cumulative_integral};
use crate::sturm_liouville::{solve_halfline, HalfLineSolution};

/// Half-line data used by the operator.
#[derive(Debug, Clone)]
pub struct HalfLineKernel {
    pub k: Vec<f64>,
    pub k_deriv: Vec<f64>,
    pub ell: Vec<f64>,
    pub ell_deriv: Vec<f64>,
    pub e_a: Vec<f64>,
    pub w: f64,
    pub ell_decay: f64,
}

impl HalfLineKernel {
    pub fn from_solution(s: &HalfLineSolution) -> Self {
        HalfLineKernel {
            k: s.k.clone(),
            k_deriv: s.k_deriv.clone(),
            ell: s.ell.clone(),
            ell_deriv: s.ell_deriv.clone(),
            e_a: s.samples.a_exp.iter().map(|v| v.exp()).collect(),
            w: s.w,
            ell_decay: s.ell_decay,
        }
    }

    fn upper(&self, g: &[f64], g_inf: f64, h: f64) -> Vec<f64> {
        let n = g.len() - 1;
        let lg: Vec<f64> = (0..=n).map(|j| self.ell[j] * self.e_a[j] * g[j]).collect();
        let mut upper = reverse_cumulative_integral(&lg, h);
        let tail = g_inf * self.e_a[n] * self.ell[n] / self.ell_decay;
        upper.iter_mut().for_each(|v| *v += tail);
        upper
    }

    /// `(2ℓ(x)/w)∫_0^x k e^{𝔞} g + (2k(x)/w)∫_x^∞ ℓ e^{𝔞} g` and its derivative.
    fn minimal(&self, g: &[f64], g_inf: f64, h: f64) -> (Vec<f64>, Vec<f64>) {
        let len = g.len();
        let kg: Vec<f64> = (0..len).map(|j| self.k[j] * self.e_a[j] * g[j]).collect();
        let lower = cumulative_integral(&kg, h);
        let upper = self.upper(g, g_inf, h);
        let c = 2.0 / self.w;
        let mut f: Vec<f64> = (0..len).map(|j| c * (self.ell[j] * lower[j] + self.k[j] * upper[j])).collect();
        f[0] = 0.0;
        let d = (0..len).map(|j| c * (self.ell_deriv[j] * lower[j] + self.k_deriv[j] * upper[j])).collect();
        (f, d)
    }

    /// `C(g) = (2/w)∫_0^∞ ℓ e^{𝔞} g`.
    fn c_functional(&self, g: &[f64], g_inf: f64, h: f64) -> f64 {
        2.0 / self.w * self.upper(g, g_inf, h)[0]
    }
}

#[derive(Debug, Clone)]
enum Core {
    Sampled(Vec<HalfLineKernel>),
    Limit { s: f64, scales: Vec<f64> },
}

/// A resolvent on the infinite star graph.
#[derive(Debug, Clone)]
pub struct InfiniteResolvent {
    kind: ResolventKind,
    lambda: f64,
    grid: EdgeGrid,
    weights: Vec<f64>,
    core: Core,
    exit_law: EdgeFunctionVec,
    c_one: Vec<f64>,
}

fn check_infinite(grid: &EdgeGrid) -> Result<()> {
    if !grid.spec.is_infinite() {
        return Err(Error::invalid("infinite-graph resolvent needs infinite edges"));
    }
    Ok(())
}

/// Minimal resolvent from half-line solutions at a common `λ`.
pub fn minimal_resolvent_inf(lambda: f64, grid: EdgeGrid, solutions: &[HalfLineSolution]) -> Result<InfiniteResolvent> {
    check_lambda(lambda)?;
    check_infinite(&grid)?;
    if solutions.len() != grid.k() {
        return Err(Error::invalid(format!("{} edge solutions for {} edges", solutions.len(), grid.k())));
    }
    for (i, s) in solutions.iter().enumerate() {
        if (s.lambda - lambda).abs() > 1e-14 * lambda {
            return Err(Error::invalid(format!("edge {i} was solved at λ={} not {lambda}", s.lambda)));
        }
        if s.n() != grid.n || (s.horizon - grid.extent()).abs() > 1e-12 * grid.extent() {
            return Err(Error::invalid(format!("edge {i} solution does not match the grid")));
        }
    }
    let kernels: Vec<HalfLineKernel> = solutions.iter().map(HalfLineKernel::from_solution).collect();
    let one = vec![1.0; grid.len()];
    let c_one: Vec<f64> = kernels.iter().map(|k| k.c_functional(&one, 1.0, grid.h)).collect();
    if let Some(bad) = c_one.iter().position(|c| !(*c > 0.0)) {
        return Err(Error::numeric(format!("C(𝟙) not positive on edge {bad}")));
    }
    let exit = kernels
        .iter()
        .map(|k| k.minimal(&one, 1.0, grid.h).0.iter().map(|v| 1.0 - lambda * v).collect())
        .collect();
    Ok(InfiniteResolvent {
        kind: ResolventKind::Minimal,
        lambda,
        grid,
        weights: Vec::new(),
        core: Core::Sampled(kernels),
        exit_law: EdgeFunctionVec::with_limits(grid, exit, Some(vec![0.0; grid.k()]))?,
        c_one,
    })
}

pub fn full_resolvent_inf(minimal: InfiniteResolvent, p: &[f64]) -> Result<InfiniteResolvent> {
    if minimal.kind != ResolventKind::Minimal {
        return Err(Error::invalid("full resolvent must be built from a minimal one"));
    }
    check_weights(p, minimal.grid.k())?;
    Ok(InfiniteResolvent { kind: ResolventKind::Full, weights: p.to_vec(), ..minimal })
}

/// Solves every half-line at `λ` and assembles the full resolvent.
pub fn build_infinite_resolvent(
    lambda: f64,
    grid: EdgeGrid,
    drifts: &DriftFamily,
    p: &[f64],
) -> Result<InfiniteResolvent> {
    check_infinite(&grid)?;
    if drifts.k() != grid.k() {
        return Err(Error::invalid(format!("{} drifts for {} edges", drifts.k(), grid.k())));
    }
    check_weights(p, grid.k())?;
    let solutions = (0..grid.k())
        .into_par_iter()
        .map(|i| {
            solve_halfline(lambda, &drifts.edge(i), grid.extent(), grid.n).map_err(|e| e.context(format!("edge {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    full_resolvent_inf(minimal_resolvent_inf(lambda, grid, &solutions)?, p)
}

/// The closed-form limit operator on infinite edges.
pub fn limit_resolvent_inf(
    lambda: f64,
    grid: EdgeGrid,
    alpha: &[f64],
    p: &[f64],
    weighting: LimitWeighting,
) -> Result<InfiniteResolvent> {
    check_lambda(lambda)?;
    check_infinite(&grid)?;
    check_weights(p, grid.k())?;
    let (weights, scales) = match weighting {
        LimitWeighting::TransformedWeights => (transform_walsh(p, alpha)?, vec![1.0; grid.k()]),
        LimitWeighting::ScaledFunctionals => {
            if alpha.len() != grid.k() {
                return Err(Error::invalid("one mass per edge is required"));
            }
            (p.to_vec(), alpha.iter().map(|a| (2.0 * a).exp()).collect())
        }
    };
    let s = (2.0 * lambda).sqrt();
    let exit = EdgeFunctionVec::from_fn(grid, |_, x| (-s * x).exp())?;
    let exit = EdgeFunctionVec::with_limits(grid, exit.into_edges(), Some(vec![0.0; grid.k()]))?;
    let c_one = scales.iter().map(|sc| sc * 2.0 / s).collect();
    Ok(InfiniteResolvent {
        kind: ResolventKind::Limit,
        lambda,
        grid,
        weights,
        core: Core::Limit { s, scales },
        exit_law: exit,
        c_one,
    })
}

/// `(e^{−s|x−y|} − e^{−s(x+y)})/s` with `s = √(2λ)`.
pub fn limit_kernel_inf(lambda: f64, x: f64, y: f64) -> f64 {
    let s = (2.0 * lambda).sqrt();
    ((-s * (x - y).abs()).exp() - (-s * (x + y)).exp()) / s
}

/// Forward and backward exponential convolutions with the tail past the horizon.
fn limit_pieces(g: &[f64], g_inf: f64, h: f64, s: f64, horizon: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let fwd = exp_convolve_forward(g, h, s)?;
    let mut bwd = exp_convolve_backward(g, h, s)?;
    for (j, b) in bwd.iter_mut().enumerate() {
        let x = j as f64 * h;
        *b += (-s * (horizon - x).max(0.0)).exp() * g_inf / s;
    }
    Ok((fwd, bwd))
}

impl InfiniteResolvent {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exit_law(&self) -> &EdgeFunctionVec {
        &self.exit_law
    }

    pub fn c_one(&self) -> &[f64] {
        &self.c_one
    }

    fn check_input(&self, g: &EdgeFunctionVec) -> Result<()> {
        let gg = g.grid();
        if gg.k() != self.grid.k() || gg.n != self.grid.n || (gg.h - self.grid.h).abs() > 1e-14 * self.grid.h {
            return Err(Error::invalid("input function lives on a different grid"));
        }
        Ok(())
    }

    pub fn c_functional(&self, i: usize, g: &[f64], g_inf: f64) -> Result<f64> {
        if g.len() != self.grid.len() {
            return Err(Error::invalid("edge samples do not match the grid"));
        }
        match &self.core {
            Core::Sampled(k) => Ok(k[i].c_functional(g, g_inf, self.grid.h)),
            Core::Limit { s, scales } => {
                let (_, bwd) = limit_pieces(g, g_inf, self.grid.h, *s, self.grid.extent())?;
                Ok(scales[i] * 2.0 * bwd[0])
            }
        }
    }

    pub fn apply_minimal(&self, g: &EdgeFunctionVec) -> Result<EdgeFunctionVec> {
        self.check_input(g)?;
        let h = self.grid.h;
        let mut values = Vec::with_capacity(self.grid.k());
        for i in 0..self.grid.k() {
            let gi = g.edge(i);
            let gl = g.limit(i);
            values.push(match &self.core {
                Core::Sampled(k) => k[i].minimal(gi, gl, h).0,
                Core::Limit { s, .. } => {
                    let (fwd, bwd) = limit_pieces(gi, gl, h, *s, self.grid.extent())?;
                    let b0 = bwd[0];
                    let mut out: Vec<f64> = (0..gi.len())
                        .map(|j| (fwd[j] + bwd[j] - (-s * j as f64 * h).exp() * b0) / s)
                        .collect();
                    out[0] = 0.0;
                    out
                }
            });
        }
        let limits = (0..self.grid.k()).map(|i| g.limit(i) / self.lambda).collect();
        EdgeFunctionVec::with_limits(self.grid, values, Some(limits))
    }

    /// Derivatives of `R⁰g` from the integral representation (sampled kinds only).
    pub fn minimal_derivative(&self, g: &EdgeFunctionVec) -> Result<Vec<Vec<f64>>> {
        self.check_input(g)?;
        match &self.core {
            Core::Sampled(kernels) => Ok(kernels
                .iter()
                .enumerate()
                .map(|(i, k)| k.minimal(g.edge(i), g.limit(i), self.grid.h).1)
                .collect()),
            Core::Limit { .. } => Err(Error::invalid("derivative representation is only kept for sampled kernels")),
        }
    }

    pub fn vertex_coefficient(&self, g: &EdgeFunctionVec) -> Result<f64> {
        let cg = (0..self.grid.k())
            .map(|i| self.c_functional(i, g.edge(i), g.limit(i)))
            .collect::<Result<Vec<_>>>()?;
        vertex_coefficient(self.lambda, &self.weights, &cg, &self.c_one)
    }
}

impl Resolvent for InfiniteResolvent {
    fn kind(&self) -> ResolventKind {
        self.kind
    }

    fn lambda(&self) -> f64 {
        self.lambda
    }

    fn grid(&self) -> &EdgeGrid {
        &self.grid
    }

    fn apply(&self, g: &EdgeFunctionVec) -> Result<EdgeFunctionVec> {
        let minimal = self.apply_minimal(g)?;
        if self.kind == ResolventKind::Minimal {
            return Ok(minimal);
        }
        let coef = self.vertex_coefficient(g)?;
        minimal.axpby(1.0, &self.exit_law, coef)
    }
}
