//! Skew and Walsh parameters and their limits under concentrating drifts.

use serde::Serialize;

use crate::error::{Error, Result};

const P_FLOOR: f64 = 1e-12;

/// Four equivalent descriptions of a skew membrane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SkewParams {
    pub p: f64,
    /// `(1 − p)/p`
    pub gamma: f64,
    /// `2p − 1`
    pub c: f64,
    /// `−½ ln γ`, so that `c = tanh β`.
    pub beta: f64,
}

fn check_open_unit(name: &str, p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!("{name} must lie in (0, 1), got {p}")));
    }
    Ok(())
}

impl SkewParams {
    pub fn from_p(p: f64) -> Result<Self> {
        check_open_unit("p", p)?;
        let gamma = (1.0 - p) / p;
        Ok(SkewParams { p, gamma, c: 2.0 * p - 1.0, beta: -0.5 * gamma.ln() })
    }

    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::invalid(format!("γ must be positive, got {gamma}")));
        }
        Self::from_p(1.0 / (1.0 + gamma))
    }

    pub fn from_c(c: f64) -> Result<Self> {
        if !(c > -1.0 && c < 1.0) {
            return Err(Error::invalid(format!("c must lie in (−1, 1), got {c}")));
        }
        Self::from_p(0.5 * (1.0 + c))
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::invalid("β must be finite"));
        }
        Self::from_p(1.0 / (1.0 + (-2.0 * beta).exp()))
    }
}

/// Clamps a derived probability into `[1e−12, 1 − 1e−12]`, warning when it bites.
fn clamp_probability(p: f64) -> f64 {
    if p < P_FLOOR || p > 1.0 - P_FLOOR {
        log::warn!("limit probability {p} clamped into [{P_FLOOR}, 1 − {P_FLOOR}]");
        p.clamp(P_FLOOR, 1.0 - P_FLOOR)
    } else {
        p
    }
}

/// Limit parameters after adding a drift of total mass `α` at the membrane.
pub fn transform_skew(p: f64, alpha: f64) -> Result<SkewParams> {
    check_open_unit("p", p)?;
    if !alpha.is_finite() {
        return Err(Error::invalid("α must be finite"));
    }
    let base = SkewParams::from_p(p)?;
    let pt = p / (p + (1.0 - p) * (-2.0 * alpha).exp());
    let clamped = clamp_probability(pt);
    if clamped != pt {
        return SkewParams::from_p(clamped);
    }
    Ok(SkewParams {
        p: pt,
        gamma: (-2.0 * alpha).exp() * base.gamma,
        c: (alpha + base.beta).tanh(),
        beta: alpha + base.beta,
    })
}

/// Converts `p → γ → c → β → p`, each step using only the previous representation.
pub fn roundtrip_reps(s: SkewParams) -> Result<SkewParams> {
    let from_gamma = SkewParams::from_gamma(s.gamma)?;
    let c = (1.0 - from_gamma.gamma) / (1.0 + from_gamma.gamma);
    let beta = c.atanh();
    SkewParams::from_beta(beta)
}

fn check_weights(p: &[f64]) -> Result<()> {
    if p.is_empty() {
        return Err(Error::invalid("at least one weight is required"));
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

/// `p̃_i = p_i e^{2α_i} / Σ_j p_j e^{2α_j}`.
pub fn transform_walsh(p: &[f64], alpha: &[f64]) -> Result<Vec<f64>> {
    check_weights(p)?;
    if alpha.len() != p.len() {
        return Err(Error::invalid(format!("{} weights but {} masses", p.len(), alpha.len())));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid("masses must be finite"));
    }
    let logs: Vec<f64> = p.iter().zip(alpha).map(|(p, a)| p.ln() + 2.0 * a).collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.iter().map(|v| clamp_probability(v / total)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalshParams {
    pub p: Vec<f64>,
    pub alpha: Vec<f64>,
    pub p_tilde: Vec<f64>,
}

impl WalshParams {
    pub fn new(p: Vec<f64>, alpha: Vec<f64>) -> Result<Self> {
        let p_tilde = transform_walsh(&p, &alpha)?;
        Ok(WalshParams { p, alpha, p_tilde })
    }
}

/// Two-edge description of a skew membrane: edge 0 is `x > 0`, edge 1 is `x < 0`.
pub fn skew_as_walsh(p: f64, alpha_right: f64, alpha_left_edge: f64) -> Result<WalshParams> {
    check_open_unit("p", p)?;
    WalshParams::new(vec![p, 1.0 - p], vec![alpha_right, alpha_left_edge])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn skew_examples() {
        let t = transform_skew(0.5, 0.0).unwrap();
        assert_eq!(t.p, 0.5);
        let e2 = 2f64.exp();
        let t = transform_skew(0.5, 1.0).unwrap();
        assert!((t.p - e2 / (e2 + 1.0)).abs() < 1e-15);
        assert!((t.p - 0.880797).abs() < 1e-6);
        assert!((t.c - 0.761594).abs() < 1e-6);
        let t = transform_skew(0.8, 2.2).unwrap();
        assert!((t.gamma - 0.0030693).abs() < 1e-7);
        assert!((t.p - 0.996940).abs() < 1e-6);
        assert!(transform_skew(0.0, 1.0).is_err());
        assert!(transform_skew(1.0, 1.0).is_err());
    }

    #[test]
    fn representations() {
        let s = SkewParams::from_p(0.8).unwrap();
        assert!((s.gamma - 0.25).abs() < 1e-15);
        assert!((s.c - 0.6).abs() < 1e-15);
        assert!((s.beta - 0.5 * 4f64.ln()).abs() < 1e-15);
        let back = roundtrip_reps(s).unwrap();
        assert!((back.p - 0.8).abs() < 1e-12);
        let h = SkewParams::from_p(0.5).unwrap();
        assert_eq!((h.gamma, h.c, h.beta), (1.0, 0.0, 0.0));
    }

    #[test]
    fn walsh_examples() {
        let third = 1.0 / 3.0;
        let p = [third, third, 1.0 - 2.0 * third];
        let a = [0.5 * 2f64.ln(), 0.0, 0.0];
        let pt = transform_walsh(&p, &a).unwrap();
        for (v, e) in pt.iter().zip([0.5, 0.25, 0.25]) {
            assert!((v - e).abs() < 1e-12);
        }
        let same = transform_walsh(&[0.2, 0.8], &[0.7, 0.7]).unwrap();
        assert!((same[0] - 0.2).abs() < 1e-15);
        assert!(transform_walsh(&[0.5, 0.6], &[0.0, 0.0]).is_err());
        assert!(transform_walsh(&[1.5, -0.5], &[0.0, 0.0]).is_err());
    }

    #[test]
    fn clamps_extreme_limits() {
        let t = transform_skew(0.5, 40.0).unwrap();
        assert!(t.p <= 1.0 - 1e-12);
    }

    proptest! {
        #[test]
        fn walsh_matches_skew_for_two_edges(p in 0.01f64..0.99, a1 in -3.0f64..3.0, a2 in -3.0f64..3.0) {
            let w = skew_as_walsh(p, a1, a2).unwrap();
            let s = transform_skew(p, a1 - a2).unwrap();
            prop_assert!((w.p_tilde[0] - s.p).abs() <= 1e-12);
        }

        #[test]
        fn representations_agree(p in 0.001f64..0.999, a in -4.0f64..4.0) {
            let t = transform_skew(p, a).unwrap();
            prop_assert!((t.gamma - (1.0 - t.p) / t.p).abs() <= 1e-12 * t.gamma.max(1.0));
            prop_assert!((t.c - (2.0 * t.p - 1.0)).abs() <= 1e-12);
            prop_assert!((t.beta + 0.5 * t.gamma.ln()).abs() <= 1e-12 * t.beta.abs().max(1.0));
            let back = roundtrip_reps(SkewParams::from_p(p).unwrap()).unwrap();
            prop_assert!((back.p - p).abs() <= 1e-12);
        }

        #[test]
        fn composition_law(p in 0.01f64..0.99, a1 in -2.0f64..2.0, a2 in -2.0f64..2.0) {
            let twice = transform_skew(transform_skew(p, a1).unwrap().p, a2).unwrap();
            let once = transform_skew(p, a1 + a2).unwrap();
            prop_assert!((twice.c - once.c).abs() <= 1e-12);
            prop_assert!((twice.gamma - once.gamma).abs() <= 1e-12 * once.gamma.max(1.0));
        }

        #[test]
        fn monotone_in_alpha(p in 0.01f64..0.99, a in -3.0f64..3.0) {
            let t = transform_skew(p, a).unwrap();
            if a > 0.0 { prop_assert!(t.p > p); }
            if a < 0.0 { prop_assert!(t.p < p); }
        }

        #[test]
        fn walsh_weights_normalised(raw in proptest::collection::vec(0.05f64..1.0, 1..6),
                                   a in proptest::collection::vec(-2.0f64..2.0, 6)) {
            let total: f64 = raw.iter().sum();
            let mut p: Vec<f64> = raw.iter().map(|v| v / total).collect();
            let drift = p.iter().sum::<f64>() - 1.0;
            p[0] -= drift;
            let pt = transform_walsh(&p, &a[..p.len()]).unwrap();
            prop_assert!((pt.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(pt.iter().all(|v| *v > 0.0));
        }
    }
}
