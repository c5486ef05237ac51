//! CSV tables with 12 significant digits and JSON provenance sidecars.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::Result;

use super::tables::{render_csv, Table};

/// Decimal with 12 significant digits; scientific outside `[1e−5, 1e12)`.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.11e}");
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-5..12).contains(&exp) {
        return sci;
    }
    let decimals = (11 - exp).max(0) as usize;
    format!("{v:.decimals$}")
}

pub fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

pub fn write_csv(path: &Path, table: &Table) -> Result<()> {
    std::fs::write(path, render_csv(table)?)?;
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub details: serde_json::Value,
}

impl Provenance {
    pub fn new(command: &str, config_sha256: String, seed: u64, details: serde_json::Value) -> Self {
        Provenance {
            tool: "membrane-lab",
            version: env!("CARGO_PKG_VERSION"),
            command: command.into(),
            config_sha256,
            seed,
            details,
        }
    }
}

/// `out/name.csv` gets `out/name.provenance.json`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    csv.with_extension("provenance.json")
}

pub fn write_provenance(csv: &Path, prov: &Provenance) -> Result<PathBuf> {
    let path = sidecar_path(csv);
    let mut text = serde_json::to_string_pretty(prov)?;
    text.push('\n');
    std::fs::write(&path, text)?;
    Ok(path)
}
