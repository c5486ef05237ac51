//! `e^{t𝔄}f` through backward-Euler products `(λR_λ)^n f` with `λ = n/t`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{sup_distance, EdgeFunctionVec};
use crate::resolvent::ResolventProvider;

#[derive(Debug, Clone, PartialEq)]
pub struct SemigroupResult {
    pub t: f64,
    pub n: usize,
    pub values: EdgeFunctionVec,
    /// `‖P_n f − P_{n/2} f‖`, absent for `n = 1`.
    pub cauchy_increment: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemigroupSummary {
    pub t: f64,
    pub n: usize,
    pub cauchy_increment: Option<f64>,
}

fn euler_product(provider: &dyn ResolventProvider, t: f64, n: usize, f: &EdgeFunctionVec) -> Result<EdgeFunctionVec> {
    let lambda = n as f64 / t;
    let r = provider.at(lambda)?;
    let mut g = f.clone();
    for _ in 0..n {
        g = r.apply(&g)?.scale(lambda);
    }
    Ok(g)
}

pub fn semigroup_via_resolvent(
    provider: &dyn ResolventProvider,
    t: f64,
    n: usize,
    f: &EdgeFunctionVec,
) -> Result<SemigroupResult> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::invalid(format!("t must be positive, got {t}")));
    }
    if !n.is_power_of_two() {
        return Err(Error::invalid(format!("n must be a power of two, got {n}")));
    }
    let values = euler_product(provider, t, n, f)?;
    let cauchy_increment = if n >= 2 {
        let half = euler_product(provider, t, n / 2, f)?;
        Some(sup_distance(&values, &half)?)
    } else {
        None
    };
    Ok(SemigroupResult { t, n, values, cauchy_increment })
}

impl SemigroupResult {
    pub fn summary(&self) -> SemigroupSummary {
        SemigroupSummary { t: self.t, n: self.n, cauchy_increment: self.cauchy_increment }
    }
}
