//! Path simulation on star graphs.
//!
//! Each path is an Euler scheme for `dX = a_{ε,i}(X)dt + dW` on its current
//! edge. When it reaches the center it picks edge `i` with probability
//! `p_i` and restarts at distance `δ`. Outer nodes of finite graphs reflect.
//!
//! Steps equal the configured `Δt` inside the zone where the drift carries
//! its mass and grow with the distance from that zone outside it; a
//! Brownian-bridge test catches center visits between grid times.
//!
//! Path `j` draws from ChaCha8 stream `j` of the configured seed, and
//! results are reduced in path order, so statistics do not depend on the
//! number of worker threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::drift::{Drift, DriftFamily, ScaledDrift};
use crate::error::{Error, Result};
use crate::grid::{EdgeFunctionVec, StarGraphSpec};
use crate::resolvent::check_weights;

/// Environment variable capping worker threads (`0` or unset: rayon default).
pub const THREADS_ENV: &str = "MEMBRANE_LAB_THREADS";

/// Tail mass of `|a_ε|` left outside the fine-step zone.
const ZONE_TAIL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphPoint {
    pub edge: usize,
    /// Distance from the center; `f64::INFINITY` is the outer node of an infinite edge.
    pub x: f64,
}

impl GraphPoint {
    pub fn center() -> Self {
        GraphPoint { edge: 0, x: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// On infinite graphs the extent is the truncation radius, which reflects.
    pub graph: StarGraphSpec,
    pub drifts: DriftFamily,
    pub p: Vec<f64>,
    pub dt: f64,
    pub t: f64,
    pub n_paths: usize,
    pub delta: f64,
    pub seed: u64,
    /// Largest step taken away from the drift zone.
    pub dt_max: f64,
}

impl SimConfig {
    /// Defaults: `δ = 3√Δt`, `Δt_max = max(Δt, min(t/100, 1e−3))`.
    pub fn new(
        graph: StarGraphSpec,
        drifts: DriftFamily,
        p: Vec<f64>,
        dt: f64,
        t: f64,
        n_paths: usize,
        seed: u64,
    ) -> Result<Self> {
        let cfg = SimConfig {
            graph,
            drifts,
            p,
            dt,
            t,
            n_paths,
            delta: 3.0 * dt.max(0.0).sqrt(),
            seed,
            dt_max: (t / 100.0).min(1e-3).max(dt),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        self.delta = delta;
        self.validate()?;
        Ok(self)
    }

    /// `(ε / (10 max|a|))²`, the largest step that resolves the drift zone.
    pub fn step_bound(&self) -> f64 {
        let amax = self.drifts.edges.iter().map(drift_sup).fold(0.0, f64::max);
        if amax == 0.0 {
            f64::INFINITY
        } else {
            (self.drifts.eps / (10.0 * amax)).powi(2)
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.graph.validate()?;
        if self.drifts.k() != self.graph.k {
            return Err(Error::invalid(format!("{} drifts for {} edges", self.drifts.k(), self.graph.k)));
        }
        check_weights(&self.p, self.graph.k)?;
        if !(self.dt > 0.0) || !(self.t >= 0.0) || !self.t.is_finite() {
            return Err(Error::invalid(format!("need Δt > 0 and t ≥ 0, got {} and {}", self.dt, self.t)));
        }
        if self.n_paths == 0 {
            return Err(Error::invalid("need at least one path"));
        }
        if !(self.delta >= self.dt.sqrt() * (1.0 - 1e-12)) {
            return Err(Error::invalid(format!("δ = {} is below √Δt = {}", self.delta, self.dt.sqrt())));
        }
        if self.delta >= self.graph.extent() {
            return Err(Error::invalid("δ must be smaller than the edge length"));
        }
        if !(self.dt_max >= self.dt) {
            return Err(Error::invalid("Δt_max must not be below Δt"));
        }
        let bound = self.step_bound();
        if self.dt > bound * (1.0 + 1e-12) {
            return Err(Error::invalid(format!("Δt = {} exceeds the drift step bound {bound:.3e}", self.dt)));
        }
        Ok(())
    }
}

fn drift_sup(d: &Drift) -> f64 {
    match d {
        Drift::Zero => 0.0,
        Drift::ExpDecay { amplitude, .. } => amplitude.abs(),
        Drift::Table { a, .. } => a.iter().fold(0.0, |m, v| m.max(v.abs())),
    }
}

/// Smallest `z` with `∫_z^∞ |a_ε| ≤ tol`.
fn zone_edge(d: &ScaledDrift, tol: f64) -> f64 {
    match &d.base {
        Drift::Zero => 0.0,
        Drift::ExpDecay { amplitude, rate } => {
            let u = (amplitude.abs() / (rate * tol)).ln() / rate;
            d.eps * u.max(0.0)
        }
        Drift::Table { x, a } => {
            // walk the table backwards accumulating |a|
            let mut tail = 0.0;
            for j in (1..x.len()).rev() {
                tail += 0.5 * (a[j].abs() + a[j - 1].abs()) * (x[j] - x[j - 1]);
                if tail > tol {
                    return d.eps * x[j];
                }
            }
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathEnd {
    pub edge: usize,
    pub x: f64,
    pub absorbed: bool,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupationStats {
    pub n_paths: usize,
    pub seed: u64,
    pub edge_freq: Vec<f64>,
    pub edge_stderr: Vec<f64>,
    /// Fraction of paths sitting exactly at the center (edge from the last draw).
    pub center_freq: f64,
    pub absorbed_freq: f64,
    pub mean_x: f64,
    pub mean_x_stderr: f64,
    pub mean_x2: f64,
    pub mean_x2_stderr: f64,
    pub mean_steps: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub ends: Vec<PathEnd>,
    pub stats: OccupationStats,
}

fn mean_and_stderr(values: impl Iterator<Item = f64>, n: usize) -> (f64, f64) {
    let mut s = 0.0;
    let mut s2 = 0.0;
    for v in values {
        s += v;
        s2 += v * v;
    }
    let nf = n as f64;
    let mean = s / nf;
    let var = if n > 1 { ((s2 - nf * mean * mean) / (nf - 1.0)).max(0.0) } else { 0.0 };
    (mean, (var / nf).sqrt())
}

/// Reduces path ends in order.
pub fn occupation_stats(ends: &[PathEnd], k: usize, seed: u64) -> OccupationStats {
    let n = ends.len();
    let nf = n as f64;
    let mut counts = vec![0usize; k];
    let mut center = 0usize;
    let mut absorbed = 0usize;
    let mut steps = 0u64;
    for e in ends {
        counts[e.edge] += 1;
        center += usize::from(e.x == 0.0);
        absorbed += usize::from(e.absorbed);
        steps += e.steps;
    }
    let edge_freq: Vec<f64> = counts.iter().map(|c| *c as f64 / nf).collect();
    let edge_stderr = edge_freq.iter().map(|f| (f * (1.0 - f) / nf).sqrt()).collect();
    let finite = ends.iter().filter(|e| !e.absorbed).map(|e| e.x);
    let (mean_x, mean_x_stderr) = mean_and_stderr(finite.clone(), n - absorbed);
    let (mean_x2, mean_x2_stderr) = mean_and_stderr(finite.map(|x| x * x), n - absorbed);
    OccupationStats {
        n_paths: n,
        seed,
        edge_freq,
        edge_stderr,
        center_freq: center as f64 / nf,
        absorbed_freq: absorbed as f64 / nf,
        mean_x,
        mean_x_stderr,
        mean_x2,
        mean_x2_stderr,
        mean_steps: steps as f64 / nf,
    }
}

/// Thread pool honouring [`THREADS_ENV`].
pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let threads = match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::invalid(format!("{THREADS_ENV} must be a nonnegative integer, got {v:?}")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::numeric(format!("thread pool: {e}")))
}

fn path_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn draw_edge(p: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, w) in p.iter().enumerate() {
        acc += w;
        if u < acc {
            return i;
        }
    }
    p.len() - 1
}

fn fold_into(mut x: f64, top: f64) -> f64 {
    // Reflect at `top`; a path cannot cross the center here, that case is handled first.
    while x > top {
        x = 2.0 * top - x;
    }
    x
}

/// Probability that a Brownian bridge between `a > 0` and `b > 0` over `dt` touches 0.
fn bridge_hits_zero(a: f64, b: f64, dt: f64, rng: &mut ChaCha8Rng) -> bool {
    let e = 2.0 * a * b / dt;
    e < 40.0 && rng.random::<f64>() < (-e).exp()
}

struct Runner<'a> {
    cfg: &'a SimConfig,
    drifts: Vec<ScaledDrift>,
    zones: Vec<f64>,
}

impl<'a> Runner<'a> {
    fn new(cfg: &'a SimConfig) -> Self {
        let drifts: Vec<ScaledDrift> = (0..cfg.drifts.k()).map(|i| cfg.drifts.edge(i)).collect();
        let zones = drifts.iter().map(|d| zone_edge(d, ZONE_TAIL)).collect();
        Runner { cfg, drifts, zones }
    }

    fn local_dt(&self, edge: usize, x: f64) -> f64 {
        let z = self.zones[edge];
        if x <= z {
            self.cfg.dt
        } else {
            let d = (x - z) / 4.0;
            (d * d).max(self.cfg.dt).min(self.cfg.dt_max)
        }
    }

    fn run(&self, start: GraphPoint, index: usize) -> PathEnd {
        let cfg = self.cfg;
        let mut rng = path_rng(cfg.seed, index);
        if start.x.is_infinite() {
            return PathEnd { edge: start.edge, x: f64::INFINITY, absorbed: true, steps: 0 };
        }
        let top = cfg.graph.extent();
        let (mut edge, mut x) = (start.edge, start.x);
        if x <= 0.0 {
            edge = draw_edge(&cfg.p, &mut rng);
            if cfg.t == 0.0 {
                return PathEnd { edge, x: 0.0, absorbed: false, steps: 0 };
            }
            x = cfg.delta;
        }
        let mut time = 0.0;
        let mut steps = 0u64;
        while time < cfg.t {
            let dt = self.local_dt(edge, x).min(cfg.t - time);
            let xi: f64 = rng.sample(StandardNormal);
            let next = x + self.drifts[edge].eval(x) * dt + dt.sqrt() * xi;
            time += dt;
            steps += 1;
            if next <= 0.0 || bridge_hits_zero(x, next, dt, &mut rng) {
                edge = draw_edge(&cfg.p, &mut rng);
                x = cfg.delta;
            } else {
                x = fold_into(next, top);
            }
        }
        PathEnd { edge, x, absorbed: false, steps }
    }
}

fn run_parallel<T: Send>(n: usize, job: impl Fn(usize) -> T + Sync + Send) -> Result<Vec<T>> {
    let pool = thread_pool()?;
    Ok(pool.install(|| (0..n).into_par_iter().map(job).collect()))
}

/// Simulates `n_paths` paths from `x0` up to time `t`.
pub fn simulate_paths(cfg: &SimConfig, x0: GraphPoint) -> Result<SimulationResult> {
    cfg.validate()?;
    if x0.edge >= cfg.graph.k || !(x0.x >= 0.0) {
        return Err(Error::invalid(format!("start point {x0:?} is not on the graph")));
    }
    if x0.x.is_finite() && x0.x > cfg.graph.extent() {
        return Err(Error::invalid(format!("start point {} beyond the edge extent", x0.x)));
    }
    if x0.x.is_infinite() && !cfg.graph.is_infinite() {
        return Err(Error::invalid("finite edges have no point at infinity"));
    }
    let runner = Runner::new(cfg);
    let ends = run_parallel(cfg.n_paths, |j| runner.run(x0, j))?;
    let stats = occupation_stats(&ends, cfg.graph.k, cfg.seed);
    Ok(SimulationResult { ends, stats })
}

/// Exact marginal at time `t` of the Walsh process started at the center:
/// edge `i` with probability `p̃_i`, distance `|N(0, t)|`.
pub fn exact_walsh_sample(p_tilde: &[f64], t: f64, n_paths: usize, seed: u64) -> Result<SimulationResult> {
    check_weights(p_tilde, p_tilde.len())?;
    if !(t >= 0.0) || n_paths == 0 {
        return Err(Error::invalid("need t ≥ 0 and at least one path"));
    }
    let sd = t.sqrt();
    let ends = run_parallel(n_paths, |j| {
        let mut rng = path_rng(seed, j);
        let edge = draw_edge(p_tilde, &mut rng);
        let z: f64 = rng.sample(StandardNormal);
        PathEnd { edge, x: (sd * z).abs(), absorbed: false, steps: 0 }
    })?;
    let stats = occupation_stats(&ends, p_tilde.len(), seed);
    Ok(SimulationResult { ends, stats })
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
    pub n_paths: usize,
}

/// `P(σ ≤ t)` for the line diffusion with drift `a_ε(|x|)` started at `ρ`,
/// where `σ` is the first time `|Z| = r`.
pub fn estimate_exit_prob(
    drift: &Drift,
    eps: f64,
    rho: f64,
    r: f64,
    t: f64,
    n_paths: usize,
    seed: u64,
) -> Result<Estimate> {
    if !(rho >= 0.0 && rho < r) {
        return Err(Error::invalid(format!("need 0 ≤ ρ < r, got ρ={rho}, r={r}")));
    }
    if !(t >= 0.0) || n_paths == 0 {
        return Err(Error::invalid("need t ≥ 0 and at least one path"));
    }
    let a = crate::drift::scale_drift(drift, eps)?;
    if t == 0.0 {
        return Ok(Estimate { value: 0.0, stderr: 0.0, n_paths });
    }
    let amax = drift_sup(drift);
    let dt = if amax == 0.0 { (t / 1000.0).min(1e-3) } else { (eps / (10.0 * amax)).powi(2).min(1e-3) };
    let dt_max = (t / 100.0).min(1e-2).max(dt);
    let z = zone_edge(&a, ZONE_TAIL);
    let hits = run_parallel(n_paths, |j| {
        let mut rng = path_rng(seed, j);
        let mut x = rho;
        let mut time = 0.0;
        while time < t {
            let m = x.abs();
            let room = (r - m).min(if m > z { m - z } else { f64::INFINITY });
            let local = if m <= z { dt } else { ((room / 4.0).powi(2)).max(dt).min(dt_max) };
            let step = local.min(t - time);
            let xi: f64 = rng.sample(StandardNormal);
            let next = x + a.eval(m) * step + step.sqrt() * xi;
            time += step;
            if next.abs() >= r {
                return true;
            }
            // bridge test against the nearer barrier
            let (d0, d1) = if x >= 0.0 { (r - x, r - next) } else { (r + x, r + next) };
            if d0 > 0.0 && d1 > 0.0 && bridge_hits_zero(d0, d1, step, &mut rng) {
                return true;
            }
            x = next;
        }
        false
    })?;
    let count = hits.iter().filter(|h| **h).count();
    let value = count as f64 / n_paths as f64;
    Ok(Estimate { value, stderr: (value * (1.0 - value) / n_paths as f64).sqrt(), n_paths })
}

/// Linear interpolation of `f` at a graph point; the outer node of an
/// infinite edge (and anything beyond the sampled range) reads the limit.
pub fn evaluate_at(f: &EdgeFunctionVec, point: GraphPoint) -> f64 {
    let grid = f.grid();
    if point.x.is_infinite() || point.x >= grid.extent() {
        return if point.x.is_infinite() || grid.spec.is_infinite() {
            f.limit(point.edge)
        } else {
            *f.edge(point.edge).last().unwrap()
        };
    }
    let v = f.edge(point.edge);
    let t = point.x / grid.h;
    let j = (t.floor() as usize).min(grid.n - 1);
    let u = t - j as f64;
    v[j] * (1.0 - u) + v[j + 1] * u
}

/// `E_{x0} f(X(t))` by simulation.
pub fn estimate_semigroup(f: &EdgeFunctionVec, cfg: &SimConfig, x0: GraphPoint) -> Result<Estimate> {
    if f.grid().k() != cfg.graph.k {
        return Err(Error::invalid("function and simulation disagree on the number of edges"));
    }
    let sim = simulate_paths(cfg, x0)?;
    let values = sim.ends.iter().map(|e| evaluate_at(f, GraphPoint { edge: e.edge, x: e.x }));
    let (value, stderr) = mean_and_stderr(values, sim.ends.len());
    Ok(Estimate { value, stderr, n_paths: sim.ends.len() })
}

/// One-sample Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted.iter().enumerate().fold(0.0, |d, (i, x)| {
        let c = cdf(*x);
        d.max((c - i as f64 / n).abs()).max(((i + 1) as f64 / n - c).abs())
    })
}

/// Critical value of the KS statistic at level 0.01 for large samples.
pub fn ks_critical_001(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}
