use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use serde_json::json;

use membrane_core::drift::DriftFamily;
use membrane_core::grid::{EdgeFunctionVec, StarGraphSpec};
use membrane_core::harness::config::{FigureSpec, LabConfig, PanelFn, Scenario};
use membrane_core::harness::output::{fmt_num, fmt_opt, write_csv, write_provenance, Provenance};
use membrane_core::harness::tables::{convergence_table, figure_table, simulation_table, Table};
use membrane_core::harness::{figure_one, run_convergence, semigroup_via_resolvent, Model};
use membrane_core::montecarlo::{simulate_paths, SimConfig};
use membrane_core::params::{transform_skew, transform_walsh};
use membrane_core::resolvent::Resolvent;
use membrane_core::sturm_liouville::{solve_edge, solve_halfline};
use membrane_core::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "membrane-lab", version, about = "Drift approximation of skew and Walsh processes")]
#[command(arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON configuration; omitted fields take their defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for CSV outputs [default: out].
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the configured scenario.
    #[arg(long)]
    scenario: Option<Scenario>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Limit edge weights from p and the drift masses α.
    Transform {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        alpha: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenfunctions k and ℓ (and j on half-lines) for each ε.
    SolveSl {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, value_delimiter = ',')]
        eps: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Applies R_λ (or the limit operator when --eps is absent) to a panel function.
    Resolvent {
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value = "cosine")]
        function: String,
        #[command(flatten)]
        common: Common,
    },
    /// ε-sweep of resolvent errors against the limit.
    Converge {
        /// Exit with status 3 when a group is not monotone or misses the tolerance.
        #[arg(long)]
        strict: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Monte Carlo occupation statistics at time t.
    Simulate {
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        t: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// e^{tA}f through the product (n/t·R_{n/t})^n f.
    Semigroup {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

struct Context {
    cfg: LabConfig,
    out: PathBuf,
}

impl Context {
    fn new(common: &Common) -> Result<Self> {
        let mut cfg = match &common.config {
            Some(path) => LabConfig::load(path)?,
            None => LabConfig::default(),
        };
        if let Some(seed) = common.seed {
            cfg.seed = seed;
        }
        if let Some(s) = common.scenario {
            cfg.scenario = s;
        }
        Ok(Context { cfg, out: common.out.clone().unwrap_or_else(|| PathBuf::from("out")) })
    }

    fn emit(&self, name: &str, command: &str, table: &Table, details: serde_json::Value) -> Result<PathBuf> {
        std::fs::create_dir_all(&self.out).map_err(|e| Error::from(e).context(self.out.display().to_string()))?;
        let path = self.out.join(format!("{name}.csv"));
        write_csv(&path, table)?;
        let prov = Provenance::new(command, self.cfg.hash(), self.cfg.seed, details);
        write_provenance(&path, &prov)?;
        info!("wrote {}", path.display());
        Ok(path)
    }
}

fn parse_panel(name: &str) -> Result<PanelFn> {
    PanelFn::ALL
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| Error::InvalidArgument(format!("unknown panel function {name:?}")))
}

fn edge_rows(f: &EdgeFunctionVec, g: &EdgeFunctionVec) -> Vec<Vec<String>> {
    let grid = f.grid();
    let mut rows = Vec::with_capacity(grid.k() * grid.len());
    for i in 0..grid.k() {
        for j in 0..grid.len() {
            rows.push(vec![i.to_string(), fmt_num(grid.x(j)), fmt_num(g.edge(i)[j]), fmt_num(f.edge(i)[j])]);
        }
    }
    rows
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|c| c.to_string()).collect()
}

fn transform(p: &[f64], alpha: &[f64], common: &Common) -> Result<()> {
    let ctx = Context::new(common)?;
    let (p_tilde, gamma) = match (p, alpha) {
        ([p], [a]) => {
            let s = transform_skew(*p, *a)?;
            (vec![s.p, 1.0 - s.p], Some(s.gamma))
        }
        _ => (transform_walsh(p, alpha)?, None),
    };
    println!("p_tilde={}", p_tilde.iter().map(|v| fmt_num(*v)).collect::<Vec<_>>().join(","));
    if let Some(g) = gamma {
        println!("gamma_tilde={}", fmt_num(g));
    }
    // printing is the main output; a table only when asked for
    if common.out.is_some() {
        let rows = p_tilde.iter().enumerate().map(|(i, v)| vec![i.to_string(), fmt_num(*v)]).collect();
        ctx.emit("transform", "transform", &(header(&["edge", "p_tilde"]), rows), json!({ "p": p, "alpha": alpha }))?;
    }
    Ok(())
}

fn solve_sl(lambda: Option<f64>, eps: Option<Vec<f64>>, common: &Common) -> Result<()> {
    let ctx = Context::new(common)?;
    let cfg = &ctx.cfg;
    let lambda = lambda.unwrap_or(cfg.figure.lambda);
    let eps = eps.unwrap_or_else(|| cfg.figure.eps.clone());
    if cfg.scenario == Scenario::Interval {
        let spec = FigureSpec { lambda, eps: eps.clone(), n: cfg.figure.n };
        let t = figure_one(&spec, cfg.interval.p, &cfg.interval.drift, cfg.interval.r)?;
        println!("limit derivative ratio at 0: {} (gamma_tilde {})", fmt_num(t.limit_derivative_ratio()), fmt_num(t.gamma_tilde));
        ctx.emit(
            "solve_sl",
            "solve-sl",
            &figure_table(&t),
            json!({ "scenario": cfg.scenario.name(), "lambda": lambda, "eps": eps, "n": spec.n }),
        )?;
        return Ok(());
    }
    let model = Model::from_config(cfg)?;
    let mut rows = Vec::new();
    let mut n_used = Vec::new();
    for &e in &eps {
        let grid = model.grid(lambda, Some(e), cfg.sweep.points_per_unit)?;
        let fam = model.family(e)?;
        n_used.push(grid.n);
        for i in 0..model.k() {
            let d = fam.edge(i);
            let cols: [Vec<f64>; 5] = if model.is_infinite() {
                let s = solve_halfline(lambda, &d, grid.extent(), grid.n)?;
                let ell: Vec<f64> = s.ell.iter().map(|v| v / s.w).collect();
                let ell_d: Vec<f64> = s.ell_deriv.iter().map(|v| v / s.w).collect();
                [s.j.f, s.k, s.k_deriv, ell, ell_d]
            } else {
                let s = solve_edge(lambda, &d, grid.extent(), grid.n)?;
                [vec![f64::NAN; grid.len()], s.k.f, s.k.deriv, s.ell.f, s.ell.deriv]
            };
            for j in 0..grid.len() {
                let mut row = vec![fmt_num(e), i.to_string(), fmt_num(grid.x(j))];
                row.extend(cols.iter().map(|c| if c[j].is_nan() { String::new() } else { fmt_num(c[j]) }));
                rows.push(row);
            }
        }
    }
    let table = (header(&["eps", "edge", "x", "j", "k", "k_deriv", "ell", "ell_deriv"]), rows);
    ctx.emit(
        "solve_sl",
        "solve-sl",
        &table,
        json!({ "scenario": cfg.scenario.name(), "lambda": lambda, "eps": eps, "n": n_used }),
    )?;
    Ok(())
}

fn resolvent(lambda: f64, eps: Option<f64>, function: &str, common: &Common) -> Result<()> {
    let ctx = Context::new(common)?;
    let f = parse_panel(function)?;
    let model = Model::from_config(&ctx.cfg)?;
    let grid = model.grid(lambda, eps, ctx.cfg.sweep.points_per_unit)?;
    let op = model.resolvent(lambda, eps, grid)?;
    let g = model.panel_function(f, grid)?;
    let out = op.apply(&g)?;
    println!("center value {}", fmt_num(out.center()));
    ctx.emit(
        "resolvent",
        "resolvent",
        &(header(&["edge", "x", "g", "f"]), edge_rows(&out, &g)),
        json!({
            "scenario": ctx.cfg.scenario.name(), "lambda": lambda, "eps": eps,
            "function": f.name(), "n": grid.n, "h": grid.h,
        }),
    )?;
    Ok(())
}

/// Returns whether every group passed.
fn converge(common: &Common) -> Result<bool> {
    let ctx = Context::new(common)?;
    let model = Model::from_config(&ctx.cfg)?;
    let rep = run_convergence(&ctx.cfg.sweep, &model)?;
    for g in &rep.groups {
        println!(
            "lambda={} {:<14} final={} monotone={} within_tolerance={}",
            fmt_num(g.lambda),
            g.function.name(),
            fmt_num(g.final_error),
            g.monotone,
            g.within_tolerance
        );
    }
    ctx.emit(
        "convergence",
        "converge",
        &convergence_table(&rep),
        json!({ "scenario": ctx.cfg.scenario.name(), "sweep": ctx.cfg.sweep, "passed": rep.passed() }),
    )?;
    Ok(rep.passed())
}

fn simulate(paths: Option<usize>, eps: Option<f64>, t: Option<f64>, common: &Common) -> Result<()> {
    let ctx = Context::new(common)?;
    let cfg = &ctx.cfg;
    let sim = &cfg.simulation;
    let eps = eps.unwrap_or(sim.eps);
    let t = t.unwrap_or(sim.t);
    let n_paths = paths.unwrap_or(sim.n_paths);
    let model = Model::from_config(cfg)?;
    let graph = if model.is_infinite() {
        StarGraphSpec::infinite(model.k(), sim.truncation.unwrap_or(10.0 * t.sqrt().max(1.0)))?
    } else {
        StarGraphSpec::finite(model.k(), model.r)?
    };
    let family = if model.drifts.iter().all(|d| d.is_zero()) { DriftFamily::zero(model.k()) } else { model.family(eps)? };
    let probe = SimConfig::new(graph, family.clone(), model.p.clone(), 1e-12, t, 1, cfg.seed)?;
    let dt = sim.dt.unwrap_or_else(|| probe.step_bound().min(1e-4));
    let mut sc = SimConfig::new(graph, family, model.p.clone(), dt, t, n_paths, cfg.seed)?;
    if let Some(d) = sim.delta {
        sc = sc.with_delta(d)?;
    }
    let res = simulate_paths(&sc, sim.start)?;
    let p_tilde = model.p_tilde()?;
    for (i, f) in res.stats.edge_freq.iter().enumerate() {
        println!("edge {i}: {} ± {} (limit {})", fmt_num(*f), fmt_num(res.stats.edge_stderr[i]), fmt_num(p_tilde[i]));
    }
    ctx.emit(
        "simulate",
        "simulate",
        &simulation_table(&res.stats, Some(&p_tilde)),
        json!({
            "scenario": cfg.scenario.name(), "eps": eps, "t": t, "dt": sc.dt, "dt_max": sc.dt_max,
            "delta": sc.delta, "n_paths": n_paths, "start": sim.start,
        }),
    )?;
    Ok(())
}

fn semigroup(t: Option<f64>, n: Option<usize>, common: &Common) -> Result<()> {
    let ctx = Context::new(common)?;
    let s = &ctx.cfg.semigroup;
    let (t, n) = (t.unwrap_or(s.t), n.unwrap_or(s.n));
    let model = Model::from_config(&ctx.cfg)?;
    // the grid must resolve the drift; λ only sets the half-line horizon
    let grid = model.grid(n as f64 / t, s.eps, s.points_per_unit)?;
    let provider = |lambda: f64| -> Result<Box<dyn Resolvent>> { model.resolvent(lambda, s.eps, grid) };
    let f = model.panel_function(s.function, grid)?;
    let res = semigroup_via_resolvent(&provider, t, n, &f)?;
    println!("center value {} cauchy increment {}", fmt_num(res.values.center()), fmt_opt(res.cauchy_increment));
    ctx.emit(
        "semigroup",
        "semigroup",
        &(header(&["edge", "x", "f", "value"]), edge_rows(&res.values, &f)),
        json!({
            "scenario": ctx.cfg.scenario.name(), "t": t, "n": n, "eps": s.eps,
            "function": s.function.name(), "grid_n": grid.n, "summary": res.summary(),
        }),
    )?;
    Ok(())
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NumericFailure(_) => 3,
        Error::InvalidArgument(_) | Error::Resolution(_) | Error::Io(_) => 2,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Transform { p, alpha, common } => transform(p, alpha, common),
        Command::SolveSl { lambda, eps, common } => solve_sl(*lambda, eps.clone(), common),
        Command::Resolvent { lambda, eps, function, common } => resolvent(*lambda, *eps, function, common),
        Command::Converge { strict, common } => match converge(common) {
            Ok(false) if *strict => {
                eprintln!("convergence criteria not met");
                return ExitCode::from(3);
            }
            other => other.map(|_| ()),
        },
        Command::Simulate { paths, eps, t, common } => simulate(*paths, *eps, *t, common),
        Command::Semigroup { t, n, common } => semigroup(*t, *n, common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_error_kind() {
        assert_eq!(exit_code(&Error::NumericFailure("x".into())), 3);
        assert_eq!(exit_code(&Error::InvalidArgument("x".into())), 2);
        assert_eq!(exit_code(&Error::Resolution("x".into())), 2);
        assert_eq!(exit_code(&Error::Io("x".into())), 2);
    }

    #[test]
    fn panel_names_round_trip() {
        for f in PanelFn::ALL {
            assert_eq!(parse_panel(f.name()).unwrap(), f);
        }
        assert!(parse_panel("nope").is_err());
    }
}
