//! Cumulative quadrature on uniform grids.
//!
//! Every `∫_0^x` in the crate is realised by [`cumulative_integral`]: composite
//! Simpson on even panel counts, Simpson's 3/8 rule on the last three panels
//! for odd node indices, and a four-point cubic-exact rule for the first node.
//! The result is exact for cubics at every node as soon as the grid has three
//! or more panels.
//!
//! The closed-form limit kernels mix `e^{±sx}` factors that overflow for
//! large `s`; they are integrated with [`exp_convolve_forward`] /
//! [`exp_convolve_backward`], which only ever multiply by decaying
//! exponentials.

use crate::error::{Error, Result};

/// `F(x_j) = ∫_0^{x_j} f` for samples `f` on a uniform grid of step `h`.
pub fn cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; f.len()];
    cumulative_integral_into(f, h, &mut out);
    out
}

/// Allocation-free variant of [`cumulative_integral`]; `out.len()` must equal `f.len()`.
pub fn cumulative_integral_into(f: &[f64], h: f64, out: &mut [f64]) {
    debug_assert_eq!(f.len(), out.len());
    let len = f.len();
    if len == 0 {
        return;
    }
    out[0] = 0.0;
    let n = len - 1;
    if n == 0 {
        return;
    }
    if n == 1 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return;
    }
    out[1] = if n >= 3 {
        h / 24.0 * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
    } else {
        h / 12.0 * (5.0 * f[0] + 8.0 * f[1] - f[2])
    };
    let third = h / 3.0;
    let three_eighths = 3.0 * h / 8.0;
    for j in 2..=n {
        out[j] = if j % 2 == 0 {
            out[j - 2] + third * (f[j - 2] + 4.0 * f[j - 1] + f[j])
        } else {
            out[j - 3] + three_eighths * (f[j - 3] + 3.0 * (f[j - 2] + f[j - 1]) + f[j])
        };
    }
}

/// `G(x_j) = ∫_{x_j}^{x_n} f`, built by running the forward scheme on the reversed samples.
pub fn reverse_cumulative_integral(f: &[f64], h: f64) -> Vec<f64> {
    let rev: Vec<f64> = f.iter().rev().copied().collect();
    let mut out = cumulative_integral(&rev, h);
    out.reverse();
    out
}

/// `∫_0^{x_n} f`.
pub fn integrate(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        2 => 0.5 * h * (f[0] + f[1]),
        _ => *cumulative_integral(f, h).last().unwrap(),
    }
}

/// `F_k(τ) = ∫_0^1 e^{-τ(1-t)} t^k dt` for k = 0, 1, 2.
fn decay_moments(tau: f64) -> [f64; 3] {
    if tau < 1.0 {
        // F_k = Σ_m (-τ)^m k! / (m+k+1)!
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let kfact = [1.0, 1.0, 2.0][k];
            let mut term = kfact;
            // (k+1)!
            for i in 1..=(k + 1) {
                term /= i as f64;
            }
            let mut sum = 0.0;
            for m in 0..40 {
                sum += term;
                term *= -tau / (m + k + 2) as f64;
                if term.abs() < 1e-20 {
                    break;
                }
            }
            *slot = sum;
        }
        out
    } else {
        let f0 = -(-tau).exp_m1() / tau;
        let f1 = (1.0 - f0) / tau;
        let f2 = (1.0 - 2.0 * f1) / tau;
        [f0, f1, f2]
    }
}

/// `A(x_j) = ∫_0^{x_j} e^{-s(x_j - y)} g(y) dy` with `g` interpolated by
/// local quadratics and the exponential integrated exactly.
///
/// Stable for any `s ≥ 0`: only `e^{-sh}` ever multiplies the running value.
pub fn exp_convolve_forward(g: &[f64], h: f64, s: f64) -> Result<Vec<f64>> {
    if g.len() < 3 {
        return Err(Error::invalid("exponential convolution needs at least 3 nodes"));
    }
    if !(s >= 0.0) || !(h > 0.0) {
        return Err(Error::invalid(format!("bad rate {s} or step {h}")));
    }
    let tau = s * h;
    let [f0, f1, f2] = decay_moments(tau);
    let decay = (-tau).exp();
    // panel weights for nodes (j-1, j, j+1) and, on the last panel, (j-2, j-1, j)
    let inner = [h * (f2 - 3.0 * f1 + 2.0 * f0) / 2.0, h * (2.0 * f1 - f2), h * (f2 - f1) / 2.0];
    let last = [h * (f2 - f1) / 2.0, h * (f0 - f2), h * (f2 + f1) / 2.0];
    let n = g.len() - 1;
    let mut out = vec![0.0; g.len()];
    for j in 1..=n {
        let panel = if j < n {
            inner[0] * g[j - 1] + inner[1] * g[j] + inner[2] * g[j + 1]
        } else {
            last[0] * g[j - 2] + last[1] * g[j - 1] + last[2] * g[j]
        };
        out[j] = decay * out[j - 1] + panel;
    }
    Ok(out)
}

/// `B(x_j) = ∫_{x_j}^{x_n} e^{-s(y - x_j)} g(y) dy`.
pub fn exp_convolve_backward(g: &[f64], h: f64, s: f64) -> Result<Vec<f64>> {
    let rev: Vec<f64> = g.iter().rev().copied().collect();
    let mut out = exp_convolve_forward(&rev, h, s)?;
    out.reverse();
    Ok(out)
}
