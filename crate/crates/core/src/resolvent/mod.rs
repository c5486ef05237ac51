//! Resolvents `R_λ = (λ − 𝔄)^{−1}` of diffusions on star graphs.
//!
//! Every operator is assembled the same way: a minimal resolvent `R⁰` for
//! the process killed at the center, the exit law `ℒ = 𝟙 − λR⁰𝟙`, the
//! center-derivative functionals `C_i(g) = (R⁰g)_i'(0)`, and the vertex term
//!
//! ```text
//! R g = R⁰g + Σ p_i C_i(g) / (λ Σ p_i C_i(𝟙)) · ℒ
//! ```

pub mod finite;
pub mod infinite;
pub mod interval;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{EdgeFunctionVec, EdgeGrid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolventKind {
    /// Killed at the center.
    Minimal,
    /// Drift-perturbed process with the vertex rule.
    Full,
    /// Closed-form limit operator.
    Limit,
}

/// How the limit operator weighs the edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitWeighting {
    /// Transformed probabilities `p̃_i` against drift-free functionals.
    TransformedWeights,
    /// Original `p_i` against functionals scaled by `e^{2α_i}`.
    ScaledFunctionals,
}

pub trait Resolvent: Send + Sync {
    fn kind(&self) -> ResolventKind;
    fn lambda(&self) -> f64;
    fn grid(&self) -> &EdgeGrid;
    fn apply(&self, g: &EdgeFunctionVec) -> Result<EdgeFunctionVec>;
}

/// Builds a resolvent of one fixed family at any requested `λ`.
pub trait ResolventProvider: Sync {
    fn at(&self, lambda: f64) -> Result<Box<dyn Resolvent>>;
}

impl<F> ResolventProvider for F
where
    F: Fn(f64) -> Result<Box<dyn Resolvent>> + Sync,
{
    fn at(&self, lambda: f64) -> Result<Box<dyn Resolvent>> {
        self(lambda)
    }
}

pub(crate) fn check_weights(p: &[f64], k: usize) -> Result<()> {
    if p.len() != k {
        return Err(Error::invalid(format!("{} weights for {k} edges", p.len())));
    }
    if p.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
        return Err(Error::invalid(format!("weights must be positive, got {p:?}")));
    }
    let sum: f64 = p.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::invalid(format!("weights must sum to 1, got {sum}")));
    }
    Ok(())
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("λ must be positive, got {lambda}")));
    }
    Ok(())
}

/// `Σ q_i C_i(g) / (λ Σ q_i C_i(𝟙))`.
pub(crate) fn vertex_coefficient(lambda: f64, q: &[f64], cg: &[f64], c_one: &[f64]) -> Result<f64> {
    let num: f64 = q.iter().zip(cg).map(|(q, c)| q * c).sum();
    let den: f64 = q.iter().zip(c_one).map(|(q, c)| q * c).sum();
    if !(den > 0.0) {
        return Err(Error::numeric(format!("vertex normalisation vanished ({den})")));
    }
    Ok(num / (lambda * den))
}
