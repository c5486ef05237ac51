//! Header and rows for every CSV the harness emits.

use crate::montecarlo::OccupationStats;

use super::convergence::ConvergenceReport;
use super::figure::FigureTable;
use super::output::{fmt_num, fmt_opt};

pub type Table = (Vec<String>, Vec<Vec<String>>);

fn header(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

pub fn convergence_table(rep: &ConvergenceReport) -> Table {
    let h = header(&[
        "scenario",
        "lambda",
        "function",
        "eps",
        "n_points",
        "h",
        "error",
        "norm_g",
        "relative_error",
        "order",
        "monotone",
        "within_tolerance",
    ]);
    let rows = rep
        .rows
        .iter()
        .map(|r| {
            let g = rep.group(r.lambda, r.function).expect("every row has a group");
            let rel = if r.norm_g > 0.0 { r.error / r.norm_g } else { r.error };
            vec![
                rep.scenario.name().to_string(),
                fmt_num(r.lambda),
                r.function.name().to_string(),
                fmt_num(r.eps),
                r.n_points.to_string(),
                fmt_num(r.h),
                fmt_num(r.error),
                fmt_num(r.norm_g),
                fmt_num(rel),
                fmt_opt(r.order),
                g.monotone.to_string(),
                g.within_tolerance.to_string(),
            ]
        })
        .collect();
    (h, rows)
}

/// One row per statistic; `limit_p_tilde_i` rows carry the limit law for comparison.
pub fn simulation_table(stats: &OccupationStats, p_tilde: Option<&[f64]>) -> Table {
    let h = header(&["name", "value", "stderr", "n_paths", "seed"]);
    let n = stats.n_paths.to_string();
    let seed = stats.seed.to_string();
    let row = |name: String, v: f64, se: Option<f64>| vec![name, fmt_num(v), fmt_opt(se), n.clone(), seed.clone()];
    let mut rows = Vec::new();
    for (i, (f, se)) in stats.edge_freq.iter().zip(&stats.edge_stderr).enumerate() {
        rows.push(row(format!("edge_{i}_freq"), *f, Some(*se)));
    }
    if let Some(pt) = p_tilde {
        for (i, v) in pt.iter().enumerate() {
            rows.push(row(format!("limit_p_tilde_{i}"), *v, None));
        }
    }
    rows.push(row("center_freq".into(), stats.center_freq, None));
    rows.push(row("absorbed_freq".into(), stats.absorbed_freq, None));
    rows.push(row("mean_x".into(), stats.mean_x, Some(stats.mean_x_stderr)));
    rows.push(row("mean_x2".into(), stats.mean_x2, Some(stats.mean_x2_stderr)));
    rows.push(row("mean_steps".into(), stats.mean_steps, None));
    (h, rows)
}

pub fn figure_table(t: &FigureTable) -> Table {
    let rows = (0..t.x.len())
        .map(|j| {
            let mut r = vec![fmt_num(t.x[j])];
            r.extend(t.curves.iter().map(|c| fmt_num(c[j])));
            r.push(fmt_num(t.limit[j]));
            r
        })
        .collect();
    (t.header(), rows)
}

/// Renders a table as CSV bytes, exactly as written to disk.
pub fn render_csv(table: &Table) -> crate::Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
    w.write_record(&table.0)?;
    for r in &table.1 {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| crate::Error::numeric(format!("csv buffer: {e}")))
}
