//! ε-sweeps comparing `R_{λ,ε}` with the limit operator.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::grid::sup_distance;
use crate::montecarlo::thread_pool;

use super::config::{PanelFn, Scenario, SweepSpec};
use super::model::Model;

/// Errors below this count as "no perturbation" and need not decrease.
pub const NOISE_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub lambda: f64,
    pub function: PanelFn,
    pub eps: f64,
    pub n_points: usize,
    pub h: f64,
    /// `max |R_{λ,ε}g − R_λ g|` over grid nodes.
    pub error: f64,
    pub norm_g: f64,
    /// `log₂(E(2ε)/E(ε))` against the previous rung.
    pub order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceGroup {
    pub lambda: f64,
    pub function: PanelFn,
    pub monotone: bool,
    pub final_error: f64,
    pub within_tolerance: bool,
}

impl ConvergenceGroup {
    pub fn passed(&self) -> bool {
        self.monotone && self.within_tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub scenario: Scenario,
    pub tolerance: f64,
    pub rows: Vec<ConvergenceRow>,
    pub groups: Vec<ConvergenceGroup>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.groups.iter().all(ConvergenceGroup::passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.groups
            .iter()
            .filter(|g| !g.passed())
            .map(|g| {
                format!(
                    "λ={} g={}: monotone={} final error {:.3e}",
                    g.lambda,
                    g.function.name(),
                    g.monotone,
                    g.final_error
                )
            })
            .collect()
    }

    pub fn group(&self, lambda: f64, function: PanelFn) -> Option<&ConvergenceGroup> {
        self.groups.iter().find(|g| g.lambda == lambda && g.function == function)
    }

    pub fn errors(&self, lambda: f64, function: PanelFn) -> Vec<f64> {
        self.rows.iter().filter(|r| r.lambda == lambda && r.function == function).map(|r| r.error).collect()
    }
}

struct Cell {
    lambda: f64,
    eps: f64,
    n: usize,
    h: f64,
    /// (error, ‖g‖) per panel member.
    errors: Vec<(f64, f64)>,
}

fn run_cell(model: &Model, spec: &SweepSpec, lambda: f64, eps: f64) -> Result<Cell> {
    let grid = model.grid(lambda, Some(eps), spec.points_per_unit)?;
    let ctx = |e: crate::Error| e.context(format!("λ={lambda}, ε={eps}"));
    let r_eps = model.resolvent(lambda, Some(eps), grid).map_err(ctx)?;
    let r_lim = model.resolvent(lambda, None, grid).map_err(ctx)?;
    let errors = spec
        .panel
        .iter()
        .map(|f| {
            let g = model.panel_function(*f, grid)?;
            let d = sup_distance(&r_eps.apply(&g)?, &r_lim.apply(&g)?)?;
            Ok((d, g.sup_norm()))
        })
        .collect::<Result<Vec<_>>>()?;
    log::debug!("cell λ={lambda} ε={eps} n={} done", grid.n);
    Ok(Cell { lambda, eps, n: grid.n, h: grid.h, errors })
}

/// Runs every `(λ, ε)` cell and checks that errors fall strictly along the
/// ladder and end below `tolerance·‖g‖`.
pub fn run_convergence(spec: &SweepSpec, model: &Model) -> Result<ConvergenceReport> {
    spec.validate()?;
    let ladder = spec.ladder();
    let jobs: Vec<(f64, f64)> =
        spec.lambdas.iter().flat_map(|l| ladder.iter().map(move |e| (*l, *e))).collect();
    let pool = thread_pool()?;
    let cells = pool.install(|| {
        jobs.par_iter().map(|(l, e)| run_cell(model, spec, *l, *e)).collect::<Result<Vec<_>>>()
    })?;

    let mut rows = Vec::new();
    let mut groups = Vec::new();
    for &lambda in &spec.lambdas {
        let mine: Vec<&Cell> = cells.iter().filter(|c| c.lambda == lambda).collect();
        for (fi, f) in spec.panel.iter().enumerate() {
            let errs: Vec<f64> = mine.iter().map(|c| c.errors[fi].0).collect();
            let norm = mine[0].errors[fi].1;
            for (m, c) in mine.iter().enumerate() {
                // orders between noise-level errors mean nothing
                let order = (m > 0 && errs[m] > NOISE_FLOOR).then(|| (errs[m - 1] / errs[m]).log2());
                rows.push(ConvergenceRow {
                    lambda,
                    function: *f,
                    eps: c.eps,
                    n_points: c.n,
                    h: c.h,
                    error: errs[m],
                    norm_g: norm,
                    order: order.filter(|o| o.is_finite()),
                });
            }
            let floor = errs.iter().all(|e| *e <= NOISE_FLOOR);
            let monotone = floor || errs.windows(2).all(|w| w[1] < w[0]);
            let final_error = *errs.last().unwrap();
            groups.push(ConvergenceGroup {
                lambda,
                function: *f,
                monotone,
                final_error,
                within_tolerance: final_error <= spec.tolerance * norm.max(f64::MIN_POSITIVE),
            });
        }
    }
    Ok(ConvergenceReport { scenario: model.scenario, tolerance: spec.tolerance, rows, groups })
}
