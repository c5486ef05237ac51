//! Increasing and decreasing solutions of `½f'' + a f' = λf` on an interval
//! with a membrane at 0, on a finite edge, and on a half-line.
//!
//! Each problem is recast as a Volterra fixed point `f = T f` and solved by
//! Picard iteration, started from `f ≡ 1`. `T` is a contraction with factor
//! at most 1/4 in the weighted norm `max e^{−ωt}|f(t)|` when
//! `ω = 2·sqrt(2λ e^{2M} max(1, γ))`, `M` being the total mass of `|a|`.
//! Derivatives come out of the same integral representations.

use crate::drift::{ScaledDrift, ScaledIntervalDrift};
use crate::error::{Error, Result};
use crate::grid::IntervalFunction;
use crate::quadrature::{cumulative_integral, cumulative_integral_into, reverse_cumulative_integral};

pub const PICARD_TOL: f64 = 1e-12;
pub const PICARD_MAX_ITER: usize = 10_000;

/// Bielecki weight that makes the Volterra maps contract by 1/4.
pub fn contraction_weight(lambda: f64, mass: f64, gamma: f64) -> f64 {
    2.0 * (2.0 * lambda * (2.0 * mass).exp() * gamma.max(1.0)).sqrt()
}

#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Weighted-norm size of the last update.
    pub residual: f64,
}

/// Picard iteration for `f = T f` on nodes at positions `t_j = j·h`.
///
/// Stops once the weighted update is below `PICARD_TOL·(1 + ‖f‖_ω)` and every
/// node has settled to the same relative tolerance; then keeps iterating
/// while the update still shrinks, so that the reported residual is a
/// certificate for the returned iterate.
pub fn picard(
    len: usize,
    positions: &[f64],
    omega: f64,
    mut map: impl FnMut(&[f64], &mut [f64]),
) -> Result<FixedPoint> {
    debug_assert_eq!(positions.len(), len);
    let weights: Vec<f64> = positions.iter().map(|t| (-omega * t).exp()).collect();
    let mut cur = vec![1.0; len];
    let mut next = vec![0.0; len];
    let mut converged_at = None;
    let mut last_update = f64::INFINITY;
    for it in 1..=PICARD_MAX_ITER {
        map(&cur, &mut next);
        let mut upd = 0.0_f64;
        let mut norm = 0.0_f64;
        let mut settled = true;
        for j in 0..len {
            let d = (next[j] - cur[j]).abs();
            upd = upd.max(weights[j] * d);
            norm = norm.max(weights[j] * next[j].abs());
            if d > PICARD_TOL * (1.0 + next[j].abs()) {
                settled = false;
            }
        }
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::numeric(format!("Picard iterate overflowed at iteration {it}")));
        }
        std::mem::swap(&mut cur, &mut next);
        match converged_at {
            None => {
                if settled && upd <= PICARD_TOL * (1.0 + norm) {
                    converged_at = Some(it);
                    last_update = upd;
                    if upd == 0.0 {
                        return Ok(FixedPoint { values: cur, iterations: it, residual: 0.0 });
                    }
                }
            }
            Some(_) => {
                if upd >= last_update || upd == 0.0 || it >= converged_at.unwrap() + 20 {
                    let residual = upd.max(if upd == 0.0 { 0.0 } else { last_update });
                    return Ok(FixedPoint { values: cur, iterations: it, residual });
                }
                last_update = upd;
            }
        }
    }
    Err(Error::numeric(format!("Picard iteration did not converge in {PICARD_MAX_ITER} steps")))
}

fn positions(len: usize, h: f64) -> Vec<f64> {
    (0..len).map(|j| j as f64 * h).collect()
}

fn exp_pair(a_exp: &[f64]) -> (Vec<f64>, Vec<f64>) {
    (a_exp.iter().map(|v| v.exp()).collect(), a_exp.iter().map(|v| (-v).exp()).collect())
}

// ---------------------------------------------------------------- interval

/// One solution of the interval problem together with its derivative.
#[derive(Debug, Clone)]
pub struct IntervalEigen {
    pub f: IntervalFunction,
    pub deriv: IntervalFunction,
    pub iterations: usize,
    pub residual: f64,
    /// Weight used for the Bielecki norm.
    pub omega: f64,
}

/// Samples of an interval drift and `𝔄(x) = 2∫_{−r}^x a` on the doubled-node grid.
#[derive(Debug, Clone)]
pub struct IntervalSamples {
    pub a: IntervalFunction,
    pub big_a: IntervalFunction,
}

pub fn sample_interval_drift(drift: &ScaledIntervalDrift, r: f64, n: usize) -> Result<IntervalSamples> {
    let h = r / n as f64;
    drift.check_resolution(h)?;
    let left: Vec<f64> = (0..=n).map(|j| drift.left.eval(r - j as f64 * h)).collect();
    let right: Vec<f64> = (0..=n).map(|j| drift.right.eval(j as f64 * h)).collect();
    let mut al = cumulative_integral(&left, h);
    al.iter_mut().for_each(|v| *v *= 2.0);
    let mut ar = cumulative_integral(&right, h);
    let base = al[n];
    ar.iter_mut().for_each(|v| *v = base + 2.0 * *v);
    Ok(IntervalSamples { a: IntervalFunction::new(r, left, right)?, big_a: IntervalFunction::new(r, al, ar)? })
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("λ must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_grid(r: f64, n: usize) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("r must be positive, got {r}")));
    }
    if n < 3 {
        return Err(Error::invalid(format!("need at least 3 subintervals, got {n}")));
    }
    Ok(())
}

/// Increasing solution with `k(−r) = 1`, `k'(−r) = 0`, `k'(0+) = γ k'(0−)`.
pub fn solve_k_interval(
    lambda: f64,
    drift: &ScaledIntervalDrift,
    gamma: f64,
    r: f64,
    n: usize,
) -> Result<IntervalEigen> {
    check_lambda(lambda)?;
    check_grid(r, n)?;
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::invalid(format!("γ must be positive, got {gamma}")));
    }
    let samples = sample_interval_drift(drift, r, n)?;
    let mass = drift.abs_mass();
    k_interval_from_samples(lambda, &samples, mass, gamma)
}

fn k_interval_from_samples(lambda: f64, s: &IntervalSamples, mass: f64, gamma: f64) -> Result<IntervalEigen> {
    let n = s.big_a.n;
    let r = s.big_a.r;
    let h = r / n as f64;
    let (el, eli) = exp_pair(&s.big_a.left);
    let (er, eri) = exp_pair(&s.big_a.right);
    let len = 2 * (n + 1);
    let mut pos = positions(n + 1, h);
    pos.extend((0..=n).map(|j| r + j as f64 * h));
    let omega = contraction_weight(lambda, mass, gamma);
    let two_l = 2.0 * lambda;

    let mut buf = vec![0.0; n + 1];
    let mut cum = vec![0.0; n + 1];
    let mut kd = vec![0.0; len];
    // writes T f into out and k' into kd
    let mut apply = |f: &[f64], out: &mut [f64], kd: &mut [f64]| {
        let (fl, fr) = f.split_at(n + 1);
        for j in 0..=n {
            buf[j] = el[j] * fl[j];
        }
        cumulative_integral_into(&buf, h, &mut cum);
        let il = cum[n];
        for j in 0..=n {
            kd[j] = two_l * eli[j] * cum[j];
        }
        cumulative_integral_into(&kd[..=n], h, &mut cum);
        for j in 0..=n {
            out[j] = 1.0 + cum[j];
        }
        let k0 = out[n];
        for j in 0..=n {
            buf[j] = er[j] * fr[j];
        }
        cumulative_integral_into(&buf, h, &mut cum);
        for j in 0..=n {
            kd[n + 1 + j] = two_l * eri[j] * (gamma * il + cum[j]);
        }
        cumulative_integral_into(&kd[n + 1..], h, &mut cum);
        for j in 0..=n {
            out[n + 1 + j] = k0 + cum[j];
        }
    };
    let mut scratch = vec![0.0; len];
    let fp = picard(len, &pos, omega, |f, out| apply(f, out, &mut scratch))?;
    let mut out = vec![0.0; len];
    apply(&fp.values, &mut out, &mut kd);
    // report the iterate itself, with the derivative of its own image
    let (kl, kr) = fp.values.split_at(n + 1);
    let (dl, dr) = kd.split_at(n + 1);
    Ok(IntervalEigen {
        f: IntervalFunction::new(r, kl.to_vec(), kr.to_vec())?,
        deriv: IntervalFunction::new(r, dl.to_vec(), dr.to_vec())?,
        iterations: fp.iterations,
        residual: fp.residual,
        omega,
    })
}

/// The drift `x ↦ −a(−x)`.
pub fn reflect_interval_drift(drift: &ScaledIntervalDrift) -> ScaledIntervalDrift {
    ScaledIntervalDrift { left: drift.right.negated(), right: drift.left.negated() }
}

/// Decreasing solution with `ℓ(r) = 1`, `ℓ'(r) = 0`, `ℓ'(0+) = γ ℓ'(0−)`,
/// obtained from the increasing solution of the mirrored problem.
pub fn solve_ell_interval(
    lambda: f64,
    drift: &ScaledIntervalDrift,
    gamma: f64,
    r: f64,
    n: usize,
) -> Result<IntervalEigen> {
    if !(gamma > 0.0) {
        return Err(Error::invalid(format!("γ must be positive, got {gamma}")));
    }
    let mirrored = solve_k_interval(lambda, &reflect_interval_drift(drift), 1.0 / gamma, r, n)?;
    let flip = |v: &[f64], sign: f64| -> Vec<f64> { v.iter().rev().map(|x| sign * x).collect() };
    Ok(IntervalEigen {
        f: IntervalFunction::new(r, flip(&mirrored.f.right, 1.0), flip(&mirrored.f.left, 1.0))?,
        deriv: IntervalFunction::new(r, flip(&mirrored.deriv.right, -1.0), flip(&mirrored.deriv.left, -1.0))?,
        ..mirrored
    })
}

/// Both interval solutions, their Wronskian `w = k'ℓ − kℓ'`, and the drift samples.
#[derive(Debug, Clone)]
pub struct IntervalSolution {
    pub lambda: f64,
    pub gamma: f64,
    pub k: IntervalEigen,
    pub ell: IntervalEigen,
    pub w: IntervalFunction,
    pub samples: IntervalSamples,
}

pub fn solve_interval(
    lambda: f64,
    drift: &ScaledIntervalDrift,
    gamma: f64,
    r: f64,
    n: usize,
) -> Result<IntervalSolution> {
    let k = solve_k_interval(lambda, drift, gamma, r, n)?;
    let ell = solve_ell_interval(lambda, drift, gamma, r, n)?;
    let wr = |kf: &[f64], kd: &[f64], lf: &[f64], ld: &[f64]| -> Vec<f64> {
        (0..kf.len()).map(|j| kd[j] * lf[j] - kf[j] * ld[j]).collect()
    };
    let w = IntervalFunction::new(
        r,
        wr(&k.f.left, &k.deriv.left, &ell.f.left, &ell.deriv.left),
        wr(&k.f.right, &k.deriv.right, &ell.f.right, &ell.deriv.right),
    )?;
    let samples = sample_interval_drift(drift, r, n)?;
    Ok(IntervalSolution { lambda, gamma, k, ell, w, samples })
}

impl IntervalSolution {
    pub fn r(&self) -> f64 {
        self.w.r
    }

    pub fn n(&self) -> usize {
        self.w.n
    }

    /// `w(x)·e^{𝔄(x)}` on both halves; constant apart from the jump by γ at 0.
    pub fn scaled_wronskian(&self) -> IntervalFunction {
        let m = |w: &[f64], a: &[f64]| -> Vec<f64> { w.iter().zip(a).map(|(w, a)| w * a.exp()).collect() };
        IntervalFunction {
            r: self.w.r,
            n: self.w.n,
            left: m(&self.w.left, &self.samples.big_a.left),
            right: m(&self.w.right, &self.samples.big_a.right),
        }
    }
}

// ---------------------------------------------------------------- finite edge

/// A solution on one edge `[0, r]` or `[0, X]`.
#[derive(Debug, Clone)]
pub struct EdgeEigen {
    pub f: Vec<f64>,
    pub deriv: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
    pub omega: f64,
}

/// Drift samples and `𝔞 = 2∫_0^x a` on one edge.
#[derive(Debug, Clone)]
pub struct EdgeSamples {
    pub h: f64,
    pub a: Vec<f64>,
    pub a_exp: Vec<f64>,
    pub mass: f64,
}

pub fn sample_edge_drift(drift: &ScaledDrift, extent: f64, n: usize) -> Result<EdgeSamples> {
    check_grid(extent, n)?;
    let h = extent / n as f64;
    let a_exp = drift.cumulative_exponent(h, n)?;
    Ok(EdgeSamples { h, a: drift.sample(h, n), a_exp, mass: drift.abs_mass() })
}

/// `k(0) = 0`, `k'(0) = 1`.
pub fn solve_k_edge(lambda: f64, drift: &ScaledDrift, r: f64, n: usize) -> Result<EdgeEigen> {
    check_lambda(lambda)?;
    let s = sample_edge_drift(drift, r, n)?;
    k_edge_from_samples(lambda, &s)
}

fn k_edge_from_samples(lambda: f64, s: &EdgeSamples) -> Result<EdgeEigen> {
    let len = s.a_exp.len();
    let h = s.h;
    let (e, ei) = exp_pair(&s.a_exp);
    let omega = contraction_weight(lambda, s.mass, 1.0);
    let two_l = 2.0 * lambda;
    let mut buf = vec![0.0; len];
    let mut cum = vec![0.0; len];
    let mut apply = |f: &[f64], out: &mut [f64], kd: &mut [f64]| {
        for j in 0..len {
            buf[j] = e[j] * f[j];
        }
        cumulative_integral_into(&buf, h, &mut cum);
        for j in 0..len {
            kd[j] = ei[j] * (1.0 + two_l * cum[j]);
        }
        cumulative_integral_into(kd, h, out);
    };
    let mut scratch = vec![0.0; len];
    let fp = picard(len, &positions(len, h), omega, |f, out| apply(f, out, &mut scratch))?;
    let mut out = vec![0.0; len];
    let mut kd = vec![0.0; len];
    apply(&fp.values, &mut out, &mut kd);
    Ok(EdgeEigen { f: fp.values, deriv: kd, iterations: fp.iterations, residual: fp.residual, omega })
}

/// `ℓ(r) = 1`, `ℓ'(r) = 0`, solved backwards from `r`.
pub fn solve_ell_edge(lambda: f64, drift: &ScaledDrift, r: f64, n: usize) -> Result<EdgeEigen> {
    check_lambda(lambda)?;
    let s = sample_edge_drift(drift, r, n)?;
    ell_edge_from_samples(lambda, &s)
}

fn ell_edge_from_samples(lambda: f64, s: &EdgeSamples) -> Result<EdgeEigen> {
    let len = s.a_exp.len();
    let h = s.h;
    // reversed coordinate u = r − x
    let (e, ei): (Vec<f64>, Vec<f64>) = {
        let (e, ei) = exp_pair(&s.a_exp);
        (e.into_iter().rev().collect(), ei.into_iter().rev().collect())
    };
    let omega = contraction_weight(lambda, s.mass, 1.0);
    let two_l = 2.0 * lambda;
    let mut buf = vec![0.0; len];
    let mut cum = vec![0.0; len];
    // dneg holds −ℓ' in the reversed coordinate
    let mut apply = |f: &[f64], out: &mut [f64], dneg: &mut [f64]| {
        for j in 0..len {
            buf[j] = e[j] * f[j];
        }
        cumulative_integral_into(&buf, h, &mut cum);
        for j in 0..len {
            dneg[j] = two_l * ei[j] * cum[j];
        }
        cumulative_integral_into(dneg, h, out);
        out.iter_mut().for_each(|v| *v += 1.0);
    };
    let mut scratch = vec![0.0; len];
    let fp = picard(len, &positions(len, h), omega, |f, out| apply(f, out, &mut scratch))?;
    let mut out = vec![0.0; len];
    let mut dneg = vec![0.0; len];
    apply(&fp.values, &mut out, &mut dneg);
    Ok(EdgeEigen {
        f: fp.values.into_iter().rev().collect(),
        deriv: dneg.into_iter().rev().map(|v| -v).collect(),
        iterations: fp.iterations,
        residual: fp.residual,
        omega,
    })
}

/// Both solutions on a finite edge, with `w = k'ℓ − kℓ'`.
#[derive(Debug, Clone)]
pub struct EdgeSolution {
    pub lambda: f64,
    pub r: f64,
    pub k: EdgeEigen,
    pub ell: EdgeEigen,
    pub w: Vec<f64>,
    pub samples: EdgeSamples,
}

pub fn solve_edge(lambda: f64, drift: &ScaledDrift, r: f64, n: usize) -> Result<EdgeSolution> {
    check_lambda(lambda)?;
    let samples = sample_edge_drift(drift, r, n)?;
    let k = k_edge_from_samples(lambda, &samples)?;
    let ell = ell_edge_from_samples(lambda, &samples)?;
    let w: Vec<f64> = (0..k.f.len()).map(|j| k.deriv[j] * ell.f[j] - k.f[j] * ell.deriv[j]).collect();
    if let Some(bad) = w.iter().position(|v| !(v.abs() >= 1e-12)) {
        return Err(Error::numeric(format!("Wronskian vanishes at node {bad}")));
    }
    Ok(EdgeSolution { lambda, r, k, ell, w, samples })
}

impl EdgeSolution {
    pub fn n(&self) -> usize {
        self.w.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.samples.h
    }
}

// ---------------------------------------------------------------- half-line

/// `ω_1 = sqrt(2λ e^{−2M})`, the guaranteed growth rate of `j`.
pub fn omega_one(lambda: f64, mass: f64) -> f64 {
    (2.0 * lambda * (-2.0 * mass).exp()).sqrt()
}

/// Default sampling horizon `12/ω_1`.
pub fn default_halfline_horizon(lambda: f64, mass: f64) -> f64 {
    12.0 / omega_one(lambda, mass)
}

/// Smallest admissible horizon: `e^{−ω_1 X} ≤ 1e−5`.
pub fn min_halfline_horizon(lambda: f64, mass: f64) -> f64 {
    1e5f64.ln() / omega_one(lambda, mass)
}

/// `j(x) = 1 + 2λ∫_0^x e^{−𝔞(y)}∫_0^y e^{𝔞} j`, so `j(0) = 1`, `j'(0) = 0`.
pub fn solve_j_halfline(lambda: f64, drift: &ScaledDrift, horizon: f64, n: usize) -> Result<(EdgeEigen, EdgeSamples)> {
    check_lambda(lambda)?;
    let s = sample_edge_drift(drift, horizon, n)?;
    let min = min_halfline_horizon(lambda, s.mass);
    if horizon < min {
        return Err(Error::Resolution(format!("horizon {horizon} below the tail bound {min:.3}")));
    }
    let j = j_from_samples(lambda, &s)?;
    Ok((j, s))
}

fn j_from_samples(lambda: f64, s: &EdgeSamples) -> Result<EdgeEigen> {
    let len = s.a_exp.len();
    let h = s.h;
    let (e, ei) = exp_pair(&s.a_exp);
    let omega = contraction_weight(lambda, s.mass, 1.0);
    let two_l = 2.0 * lambda;
    let mut buf = vec![0.0; len];
    let mut cum = vec![0.0; len];
    let mut apply = |f: &[f64], out: &mut [f64], jd: &mut [f64]| {
        for j in 0..len {
            buf[j] = e[j] * f[j];
        }
        cumulative_integral_into(&buf, h, &mut cum);
        for j in 0..len {
            jd[j] = two_l * ei[j] * cum[j];
        }
        cumulative_integral_into(jd, h, out);
        out.iter_mut().for_each(|v| *v += 1.0);
    };
    let mut scratch = vec![0.0; len];
    let fp = picard(len, &positions(len, h), omega, |f, out| apply(f, out, &mut scratch))?;
    let mut out = vec![0.0; len];
    let mut jd = vec![0.0; len];
    apply(&fp.values, &mut out, &mut jd);
    Ok(EdgeEigen { f: fp.values, deriv: jd, iterations: fp.iterations, residual: fp.residual, omega })
}

/// Half-line data: `j`, `k = j∫_0^x e^{−𝔞}/j²`, `ℓ = j∫_x^∞ e^{−𝔞}/j²`, and the
/// constant `w = e^{𝔞}(k'ℓ − kℓ') = ℓ(0)`.
#[derive(Debug, Clone)]
pub struct HalfLineSolution {
    pub lambda: f64,
    pub horizon: f64,
    pub j: EdgeEigen,
    pub k: Vec<f64>,
    pub k_deriv: Vec<f64>,
    pub ell: Vec<f64>,
    pub ell_deriv: Vec<f64>,
    pub w: f64,
    pub samples: EdgeSamples,
    /// Decay rate of `ℓ` at the horizon, used for tail corrections.
    pub ell_decay: f64,
}

pub fn k_ell_from_j(lambda: f64, j: EdgeEigen, samples: EdgeSamples) -> Result<HalfLineSolution> {
    let len = j.f.len();
    let n = len - 1;
    let h = samples.h;
    let horizon = n as f64 * h;
    let ei: Vec<f64> = samples.a_exp.iter().map(|v| (-v).exp()).collect();
    let integrand: Vec<f64> = (0..len).map(|i| ei[i] / (j.f[i] * j.f[i])).collect();
    let fwd = cumulative_integral(&integrand, h);
    let mut bwd = reverse_cumulative_integral(&integrand, h);
    // ∫_X^∞ e^{−𝔞}/j² with 𝔞 frozen and j growing like e^{κx}
    let kappa = j.deriv[n] / j.f[n];
    if !(kappa > 0.0) {
        return Err(Error::numeric("half-line solution does not grow at the horizon"));
    }
    let tail = integrand[n] / (2.0 * kappa);
    bwd.iter_mut().for_each(|v| *v += tail);
    let k: Vec<f64> = (0..len).map(|i| j.f[i] * fwd[i]).collect();
    let k_deriv: Vec<f64> = (0..len).map(|i| j.deriv[i] * fwd[i] + ei[i] / j.f[i]).collect();
    let ell: Vec<f64> = (0..len).map(|i| j.f[i] * bwd[i]).collect();
    let ell_deriv: Vec<f64> = (0..len).map(|i| j.deriv[i] * bwd[i] - ei[i] / j.f[i]).collect();
    let w = ell[0];
    if !(w > 1e-12) {
        return Err(Error::numeric(format!("degenerate half-line Wronskian {w}")));
    }
    let ell_decay = -ell_deriv[n] / ell[n];
    Ok(HalfLineSolution { lambda, horizon, j, k, k_deriv, ell, ell_deriv, w, samples, ell_decay })
}

pub fn solve_halfline(lambda: f64, drift: &ScaledDrift, horizon: f64, n: usize) -> Result<HalfLineSolution> {
    let (j, s) = solve_j_halfline(lambda, drift, horizon, n)?;
    k_ell_from_j(lambda, j, s)
}

impl HalfLineSolution {
    pub fn n(&self) -> usize {
        self.k.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.samples.h
    }

    /// `e^{𝔞}(k'ℓ − kℓ')` at each node.
    pub fn scaled_wronskian(&self) -> Vec<f64> {
        (0..self.k.len())
            .map(|i| {
                self.samples.a_exp[i].exp() * (self.k_deriv[i] * self.ell[i] - self.k[i] * self.ell_deriv[i])
            })
            .collect()
    }
}

// ---------------------------------------------------------------- limits

/// Closed forms of the drift-free limit on `[0, r]` with `s = √(2λ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitEdge {
    pub lambda: f64,
    pub r: f64,
}

impl LimitEdge {
    pub fn s(&self) -> f64 {
        (2.0 * self.lambda).sqrt()
    }

    /// `sinh(sx)/s`.
    pub fn k(&self, x: f64) -> f64 {
        let s = self.s();
        (s * x).sinh() / s
    }

    pub fn k_deriv(&self, x: f64) -> f64 {
        (self.s() * x).cosh()
    }

    /// `cosh(s(r − x))`.
    pub fn ell(&self, x: f64) -> f64 {
        (self.s() * (self.r - x)).cosh()
    }

    pub fn ell_deriv(&self, x: f64) -> f64 {
        let s = self.s();
        -s * (s * (self.r - x)).sinh()
    }

    /// `cosh(sr)`, constant in `x`.
    pub fn w(&self) -> f64 {
        (self.s() * self.r).cosh()
    }

    /// Edge-specific `k_i = e^{−2α_i} k`.
    pub fn k_edge(&self, alpha: f64, x: f64) -> f64 {
        (-2.0 * alpha).exp() * self.k(x)
    }
}

/// `V(y, z) = e^{−2α}γ` across the membrane and `1` on one side.
pub fn limit_kernel(alpha: f64, gamma: f64, y: f64, z: f64) -> f64 {
    if y * z < 0.0 {
        (-2.0 * alpha).exp() * gamma
    } else {
        1.0
    }
}

/// Closed forms of the drift-free half-line limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitHalfLine {
    pub lambda: f64,
}

impl LimitHalfLine {
    pub fn s(&self) -> f64 {
        (2.0 * self.lambda).sqrt()
    }

    pub fn j(&self, x: f64) -> f64 {
        (self.s() * x).cosh()
    }

    pub fn k(&self, alpha: f64, x: f64) -> f64 {
        let s = self.s();
        (-2.0 * alpha).exp() * (s * x).sinh() / s
    }

    /// `ℓ/w = e^{−sx}`.
    pub fn ell_over_w(&self, x: f64) -> f64 {
        (-self.s() * x).exp()
    }
}
