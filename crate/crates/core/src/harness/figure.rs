//! Increasing interval solutions `k_ε` for several `ε` next to their limit.

use crate::drift::IntervalDrift;
use crate::error::{Error, Result};
use crate::grid::IntervalFunction;
use crate::params::transform_skew;
use crate::sturm_liouville::solve_k_interval;

use super::config::FigureSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct FigureTable {
    pub x: Vec<f64>,
    pub eps: Vec<f64>,
    /// One column per `ε`, in the order of `eps`.
    pub curves: Vec<Vec<f64>>,
    pub limit: Vec<f64>,
    pub gamma: f64,
    pub gamma_tilde: f64,
}

/// `k` of the drift-free problem with jump `γ̃`:
/// `cosh(s(x + r))` left of 0, `cosh(sr)cosh(sx) + γ̃ sinh(sr)sinh(sx)` right of it.
pub fn limit_k(lambda: f64, gamma_tilde: f64, r: f64, x: f64) -> f64 {
    let s = (2.0 * lambda).sqrt();
    if x <= 0.0 {
        (s * (x + r)).cosh()
    } else {
        (s * r).cosh() * (s * x).cosh() + gamma_tilde * (s * r).sinh() * (s * x).sinh()
    }
}

fn flatten(f: &IntervalFunction) -> Vec<f64> {
    // left half up to 0, then the right half without repeating 0
    f.left.iter().chain(f.right.iter().skip(1)).copied().collect()
}

pub fn figure_one(spec: &FigureSpec, p: f64, drift: &IntervalDrift, r: f64) -> Result<FigureTable> {
    if spec.eps.is_empty() || spec.eps.iter().any(|e| !(*e > 0.0)) {
        return Err(Error::invalid("figure needs positive ε values"));
    }
    let gamma = (1.0 - p) / p;
    let params = transform_skew(p, drift.alpha())?;
    let gamma_tilde = params.gamma;
    let n = spec.n;
    let curves = spec
        .eps
        .iter()
        .map(|e| {
            let k = solve_k_interval(spec.lambda, &drift.scaled(*e)?, gamma, r, n)
                .map_err(|err| err.context(format!("ε={e}")))?;
            Ok(flatten(&k.f))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = IntervalFunction::from_fn(r, n, |x| x)?;
    let x = flatten(&grid);
    let limit = x.iter().map(|x| limit_k(spec.lambda, gamma_tilde, r, *x)).collect();
    Ok(FigureTable { x, eps: spec.eps.clone(), curves, limit, gamma, gamma_tilde })
}

impl FigureTable {
    pub fn header(&self) -> Vec<String> {
        let mut h = vec!["x".to_string()];
        h.extend(self.eps.iter().map(|e| format!("k_eps_{e}")));
        h.push("k_limit".into());
        h
    }

    /// Index of `x = 0`.
    pub fn center(&self) -> usize {
        (self.x.len() - 1) / 2
    }

    /// `k'(0+)/k'(0−)` of the limit curve from one-sided three-point stencils.
    pub fn limit_derivative_ratio(&self) -> f64 {
        let c = self.center();
        let h = self.x[c + 1] - self.x[c];
        let k = &self.limit;
        let plus = (-3.0 * k[c] + 4.0 * k[c + 1] - k[c + 2]) / (2.0 * h);
        let minus = (3.0 * k[c] - 4.0 * k[c - 1] + k[c - 2]) / (2.0 * h);
        plus / minus
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_curve_closed_form() {
        let (l, g, r) = (1.0, 0.1, 1.0);
        let s = 2f64.sqrt();
        let hh = 1e-6;
        let dp = (limit_k(l, g, r, hh) - limit_k(l, g, r, 0.0)) / hh;
        let dm = (limit_k(l, g, r, 0.0) - limit_k(l, g, r, -hh)) / hh;
        assert!((dp / dm - g).abs() < 1e-4);
        assert!((limit_k(l, g, r, -1.0) - 1.0).abs() < 1e-15);
        let x = 0.3;
        let k2 = (limit_k(l, g, r, x + 1e-4) - 2.0 * limit_k(l, g, r, x) + limit_k(l, g, r, x - 1e-4)) / 1e-8;
        assert!((0.5 * k2 - l * limit_k(l, g, r, x)).abs() < 1e-5 * s);
    }

    #[test]
    fn table_layout() {
        let spec = FigureSpec { eps: vec![1.0], n: 100, ..FigureSpec::default() };
        let t = figure_one(&spec, 0.8, &IntervalDrift::figure_one(), 1.0).unwrap();
        assert_eq!(t.x.len(), 201);
        assert_eq!(t.x[t.center()], 0.0);
        assert_eq!(t.header(), vec!["x", "k_eps_1", "k_limit"]);
        assert!((t.gamma_tilde - 0.25 * (-4.4f64).exp()).abs() < 1e-12);
    }
}
