//! Resolvents on the star graph with edges of finite length `r`.

use rayon::prelude::*;

use super::{check_lambda, check_weights, vertex_coefficient, LimitWeighting, Resolvent, ResolventKind};
use crate::drift::DriftFamily;
use crate::error::{Error, Result};
use crate::grid::{EdgeFunctionVec, EdgeGrid};
use crate::params::transform_walsh;
use crate::quadrature::{
    cumulative_integral, exp_convolve_backward, exp_convolve_forward, integrate, reverse_cumulative_integral,
};
use crate::sturm_liouville::{solve_edge, EdgeSolution};

/// Sampled `k`, `ℓ`, `w` of one edge.
#[derive(Debug, Clone)]
pub struct EdgeKernel {
    pub k: Vec<f64>,
    pub k_deriv: Vec<f64>,
    pub ell: Vec<f64>,
    pub ell_deriv: Vec<f64>,
    pub w: Vec<f64>,
}

impl EdgeKernel {
    fn from_solution(s: &EdgeSolution) -> Result<Self> {
        if let Some(bad) = s.w.iter().position(|w| !(w.abs() >= 1e-12)) {
            return Err(Error::numeric(format!("Wronskian too small at node {bad}")));
        }
        Ok(EdgeKernel {
            k: s.k.f.clone(),
            k_deriv: s.k.deriv.clone(),
            ell: s.ell.f.clone(),
            ell_deriv: s.ell.deriv.clone(),
            w: s.w.clone(),
        })
    }

    /// `(R⁰g)(x) = 2k(x)∫_x^r ℓg/w + 2ℓ(x)∫_0^x kg/w` and its derivative.
    fn minimal(&self, g: &[f64], h: f64) -> (Vec<f64>, Vec<f64>) {
        let len = g.len();
        let kg: Vec<f64> = (0..len).map(|j| self.k[j] * g[j] / self.w[j]).collect();
        let lg: Vec<f64> = (0..len).map(|j| self.ell[j] * g[j] / self.w[j]).collect();
        let lower = cumulative_integral(&kg, h);
        let upper = reverse_cumulative_integral(&lg, h);
        let f = (0..len).map(|j| 2.0 * (self.k[j] * upper[j] + self.ell[j] * lower[j])).collect();
        let d = (0..len).map(|j| 2.0 * (self.k_deriv[j] * upper[j] + self.ell_deriv[j] * lower[j])).collect();
        (f, d)
    }

    /// `C(g) = 2∫_0^r ℓg/w`.
    fn c_functional(&self, g: &[f64], h: f64) -> f64 {
        let lg: Vec<f64> = (0..g.len()).map(|j| self.ell[j] * g[j] / self.w[j]).collect();
        2.0 * integrate(&lg, h)
    }
}

/// Drift-free limit pieces, evaluated through decaying exponentials only.
#[derive(Debug, Clone, Copy)]
struct ClosedForm {
    s: f64,
    r: f64,
}

impl ClosedForm {
    fn d(&self) -> f64 {
        1.0 + (-2.0 * self.s * self.r).exp()
    }

    fn minimal(&self, g: &[f64], h: f64, n: usize) -> Result<Vec<f64>> {
        let (s, r) = (self.s, self.r);
        let fwd = exp_convolve_forward(g, h, s)?;
        let bwd = exp_convolve_backward(g, h, s)?;
        let (f_r, b_0) = (fwd[n], bwd[0]);
        let scale = 1.0 / (s * self.d());
        let mut out = vec![0.0; n + 1];
        for (j, slot) in out.iter_mut().enumerate().skip(1) {
            let x = if j == n { r } else { j as f64 * h };
            let (fx, bx) = (fwd[j], bwd[j]);
            let e_rx = (-s * (r - x)).exp();
            let e_x = (-s * x).exp();
            let tail = f_r - e_rx * fx;
            let head = b_0 - e_x * bx;
            let t1 = bx + e_rx * tail - e_x * e_x * bx - e_x * (-s * r).exp() * tail;
            let t2 = fx + e_rx * e_rx * fx - (e_x + e_rx * (-s * r).exp()) * head;
            *slot = scale * (t1 + t2);
        }
        Ok(out)
    }

    fn c_functional(&self, g: &[f64], h: f64, n: usize) -> Result<f64> {
        let fwd = exp_convolve_forward(g, h, self.s)?;
        let bwd = exp_convolve_backward(g, h, self.s)?;
        Ok(2.0 / self.d() * (bwd[0] + (-self.s * self.r).exp() * fwd[n]))
    }

    /// `cosh(s(r − x))/cosh(sr)`.
    fn exit_law(&self, x: f64) -> f64 {
        let (s, r) = (self.s, self.r);
        ((-s * x).exp() + (-s * (2.0 * r - x)).exp()) / self.d()
    }

    /// `C(𝟙) = 2 tanh(sr)/s`.
    fn c_one(&self) -> f64 {
        2.0 * (self.s * self.r).tanh() / self.s
    }
}

#[derive(Debug, Clone)]
enum Core {
    Sampled(Vec<EdgeKernel>),
    Limit { form: ClosedForm, scales: Vec<f64> },
}

/// A resolvent on the finite star graph.
#[derive(Debug, Clone)]
pub struct FiniteResolvent {
    kind: ResolventKind,
    lambda: f64,
    grid: EdgeGrid,
    /// Vertex weights; empty for the minimal kind.
    weights: Vec<f64>,
    core: Core,
    exit_law: EdgeFunctionVec,
    c_one: Vec<f64>,
}

fn finite_r(grid: &EdgeGrid) -> Result<f64> {
    if grid.spec.is_infinite() {
        return Err(Error::invalid("finite-graph resolvent needs finite edges"));
    }
    Ok(grid.extent())
}

/// Minimal resolvent from per-edge solutions at a common `λ`.
pub fn minimal_resolvent(lambda: f64, grid: EdgeGrid, solutions: &[EdgeSolution]) -> Result<FiniteResolvent> {
    check_lambda(lambda)?;
    let r = finite_r(&grid)?;
    if solutions.len() != grid.k() {
        return Err(Error::invalid(format!("{} edge solutions for {} edges", solutions.len(), grid.k())));
    }
    for (i, s) in solutions.iter().enumerate() {
        if (s.lambda - lambda).abs() > 1e-14 * lambda {
            return Err(Error::invalid(format!("edge {i} was solved at λ={} not {lambda}", s.lambda)));
        }
        if s.n() != grid.n || (s.r - r).abs() > 1e-14 * r {
            return Err(Error::invalid(format!("edge {i} solution does not match the grid")));
        }
    }
    let kernels = solutions.iter().map(EdgeKernel::from_solution).collect::<Result<Vec<_>>>()?;
    let one = vec![1.0; grid.len()];
    let c_one: Vec<f64> = kernels.iter().map(|k| k.c_functional(&one, grid.h)).collect();
    if let Some(bad) = c_one.iter().position(|c| !(*c > 0.0)) {
        return Err(Error::numeric(format!("C(𝟙) not positive on edge {bad}")));
    }
    let exit = kernels
        .iter()
        .map(|k| k.minimal(&one, grid.h).0.iter().map(|v| 1.0 - lambda * v).collect())
        .collect();
    Ok(FiniteResolvent {
        kind: ResolventKind::Minimal,
        lambda,
        grid,
        weights: Vec::new(),
        core: Core::Sampled(kernels),
        exit_law: EdgeFunctionVec::new(grid, exit)?,
        c_one,
    })
}

/// Adds the vertex rule with probabilities `p` to a minimal resolvent.
pub fn full_resolvent(minimal: FiniteResolvent, p: &[f64]) -> Result<FiniteResolvent> {
    if minimal.kind != ResolventKind::Minimal {
        return Err(Error::invalid("full resolvent must be built from a minimal one"));
    }
    check_weights(p, minimal.grid.k())?;
    Ok(FiniteResolvent { kind: ResolventKind::Full, weights: p.to_vec(), ..minimal })
}

/// Solves every edge at `λ` for the drift family and assembles the full resolvent.
pub fn build_finite_resolvent(
    lambda: f64,
    grid: EdgeGrid,
    drifts: &DriftFamily,
    p: &[f64],
) -> Result<FiniteResolvent> {
    let r = finite_r(&grid)?;
    if drifts.k() != grid.k() {
        return Err(Error::invalid(format!("{} drifts for {} edges", drifts.k(), grid.k())));
    }
    check_weights(p, grid.k())?;
    let solutions = (0..grid.k())
        .into_par_iter()
        .map(|i| solve_edge(lambda, &drifts.edge(i), r, grid.n).map_err(|e| e.context(format!("edge {i}"))))
        .collect::<Result<Vec<_>>>()?;
    full_resolvent(minimal_resolvent(lambda, grid, &solutions)?, p)
}

/// The closed-form limit operator for edge masses `α` and probabilities `p`.
pub fn limit_resolvent(
    lambda: f64,
    grid: EdgeGrid,
    alpha: &[f64],
    p: &[f64],
    weighting: LimitWeighting,
) -> Result<FiniteResolvent> {
    check_lambda(lambda)?;
    let r = finite_r(&grid)?;
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
    let form = ClosedForm { s: (2.0 * lambda).sqrt(), r };
    let exit = EdgeFunctionVec::from_fn(grid, |_, x| form.exit_law(x))?;
    let c_one = scales.iter().map(|s| s * form.c_one()).collect();
    Ok(FiniteResolvent {
        kind: ResolventKind::Limit,
        lambda,
        grid,
        weights,
        core: Core::Limit { form, scales },
        exit_law: exit,
        c_one,
    })
}

impl FiniteResolvent {
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn exit_law(&self) -> &EdgeFunctionVec {
        &self.exit_law
    }

    /// `C_i(𝟙)` per edge, including any scaling of the functionals.
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

    /// `C_i(g_i)` on edge `i`, including any scaling of the functionals.
    pub fn c_functional(&self, i: usize, g: &[f64]) -> Result<f64> {
        if g.len() != self.grid.len() {
            return Err(Error::invalid("edge samples do not match the grid"));
        }
        match &self.core {
            Core::Sampled(k) => Ok(k[i].c_functional(g, self.grid.h)),
            Core::Limit { form, scales } => Ok(scales[i] * form.c_functional(g, self.grid.h, self.grid.n)?),
        }
    }

    /// `R⁰g`, the minimal part of the operator.
    pub fn apply_minimal(&self, g: &EdgeFunctionVec) -> Result<EdgeFunctionVec> {
        self.check_input(g)?;
        let h = self.grid.h;
        let values = match &self.core {
            Core::Sampled(kernels) => {
                kernels.iter().zip(g.edges()).map(|(k, gi)| k.minimal(gi, h).0).collect::<Vec<_>>()
            }
            Core::Limit { form, .. } => g
                .edges()
                .iter()
                .map(|gi| form.minimal(gi, h, self.grid.n))
                .collect::<Result<Vec<_>>>()?,
        };
        EdgeFunctionVec::new(self.grid, values)
    }

    /// Derivatives of `R⁰g` from the integral representation (sampled kinds only).
    pub fn minimal_derivative(&self, g: &EdgeFunctionVec) -> Result<Vec<Vec<f64>>> {
        self.check_input(g)?;
        match &self.core {
            Core::Sampled(kernels) => {
                Ok(kernels.iter().zip(g.edges()).map(|(k, gi)| k.minimal(gi, self.grid.h).1).collect())
            }
            Core::Limit { .. } => Err(Error::invalid("derivative representation is only kept for sampled kernels")),
        }
    }

    /// The vertex coefficient multiplying `ℒ`.
    pub fn vertex_coefficient(&self, g: &EdgeFunctionVec) -> Result<f64> {
        let cg = (0..self.grid.k()).map(|i| self.c_functional(i, g.edge(i))).collect::<Result<Vec<_>>>()?;
        vertex_coefficient(self.lambda, &self.weights, &cg, &self.c_one)
    }

    /// `|R g(center) − Σ p̃_i R^refl g_i(0)|`, where `R^refl` is the resolvent of
    /// Brownian motion reflected at both ends of `[0, r]`, integrated directly.
    pub fn excursion_identity_check(&self, g: &EdgeFunctionVec) -> Result<f64> {
        let Core::Limit { form, scales } = &self.core else {
            return Err(Error::invalid("the excursion identity applies to the limit operator"));
        };
        let center = self.apply(g)?.center();
        let total: f64 = self.weights.iter().zip(scales).map(|(w, s)| w * s).sum();
        let (s, r, h) = (form.s, form.r, self.grid.h);
        let denom = 1.0 - (-2.0 * s * r).exp();
        let mut expected = 0.0;
        for (i, gi) in g.edges().iter().enumerate() {
            let kernel: Vec<f64> = gi
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let y = self.grid.x(j);
                    2.0 / s * ((-s * y).exp() + (-s * (2.0 * r - y)).exp()) / denom * v
                })
                .collect();
            expected += self.weights[i] * scales[i] / total * integrate(&kernel, h);
        }
        Ok((center - expected).abs())
    }
}

impl Resolvent for FiniteResolvent {
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
