use proptest::prelude::*;

use membrane_core::drift::{scale_drift, Drift};
use membrane_core::grid::{make_grid, sup_distance, EdgeFunctionVec, StarGraphSpec};
use membrane_core::harness::output::fmt_num;
use membrane_core::params::{transform_skew, transform_walsh};
use membrane_core::quadrature::cumulative_integral;
use membrane_core::resolvent::finite::limit_resolvent;
use membrane_core::resolvent::{LimitWeighting, Resolvent};
use membrane_core::sturm_liouville::solve_edge;

fn weights(raw: &[f64]) -> Vec<f64> {
    let total: f64 = raw.iter().sum();
    raw.iter().map(|v| v / total).collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cumulative_integral_exact_on_cubics(
        c in prop::array::uniform4(-2.0f64..2.0),
        n in 3usize..40,
        len in 0.1f64..3.0,
    ) {
        let h = len / n as f64;
        let f: Vec<f64> = (0..=n).map(|j| {
            let x = j as f64 * h;
            c[0] + c[1] * x + c[2] * x * x + c[3] * x * x * x
        }).collect();
        let cum = cumulative_integral(&f, h);
        for (j, v) in cum.iter().enumerate() {
            let x = j as f64 * h;
            let exact = c[0] * x + c[1] * x * x / 2.0 + c[2] * x.powi(3) / 3.0 + c[3] * x.powi(4) / 4.0;
            prop_assert!((v - exact).abs() <= 1e-12 * (1.0 + exact.abs()), "node {j}: {v} vs {exact}");
        }
    }

    #[test]
    fn scaling_keeps_the_mass(amp in -3.0f64..3.0, rate in 0.5f64..8.0, eps in 0.01f64..1.0) {
        let d = Drift::exp_decay(amp, rate);
        let s = scale_drift(&d, eps).unwrap();
        prop_assert!((s.alpha() - d.alpha()).abs() <= 1e-12 * (1.0 + d.alpha().abs()));
        // everything sits within a few ε of the origin
        let far = s.window_integral(40.0 * eps / rate, 80.0 * eps / rate).unwrap();
        prop_assert!(far.abs() <= 1e-12 * (1.0 + amp.abs()));
    }

    #[test]
    fn edge_eigenfunctions_are_monotone(
        amp in -2.0f64..2.0,
        rate in 1.0f64..6.0,
        lambda in 0.2f64..4.0,
    ) {
        let d = scale_drift(&Drift::exp_decay(amp, rate), 0.5).unwrap();
        let sol = solve_edge(lambda, &d, 1.0, 400).unwrap();
        prop_assert!(sol.k.f.windows(2).all(|w| w[1] > w[0]));
        prop_assert!(sol.ell.f.windows(2).all(|w| w[1] < w[0]));
        prop_assert!(sol.ell.f.iter().all(|v| *v > 0.0));
        prop_assert!(sol.k.f[0] == 0.0 && (sol.ell.f[400] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn limit_resolvent_axioms(
        raw in prop::collection::vec(0.05f64..1.0, 2..6),
        alpha_seed in prop::collection::vec(-1.5f64..1.5, 6),
        lambda in 0.1f64..5.0,
        mu in 0.1f64..5.0,
        shift in -0.5f64..0.5,
    ) {
        let k = raw.len();
        let p = weights(&raw);
        let alpha = &alpha_seed[..k];
        let grid = make_grid(StarGraphSpec::finite(k, 1.0).unwrap(), 400).unwrap();
        let rl = limit_resolvent(lambda, grid, alpha, &p, LimitWeighting::TransformedWeights).unwrap();
        let rm = limit_resolvent(mu, grid, alpha, &p, LimitWeighting::ScaledFunctionals).unwrap();
        let g = EdgeFunctionVec::from_fn(grid, |i, x| 1.0 + shift + (i as f64 + 1.0) * x * (1.0 - x)).unwrap();
        let fl = rl.apply(&g).unwrap();
        let fm = rm.apply(&g).unwrap();
        // g > 0 gives f > 0, and λ‖R_λ g‖ ≤ ‖g‖
        prop_assert!(fl.min_value() > 0.0);
        prop_assert!(lambda * fl.sup_norm() <= g.sup_norm() + 1e-10);
        let one = EdgeFunctionVec::constant(grid, 1.0);
        prop_assert!(sup_distance(&rl.apply(&one).unwrap().scale(lambda), &one).unwrap() <= 1e-10);
        let lhs = fl.axpby(1.0, &fm, -1.0).unwrap();
        let rhs = rl.apply(&fm).unwrap().scale(mu - lambda);
        let gap = sup_distance(&lhs, &rhs).unwrap();
        prop_assert!(gap <= 1e-7 * g.sup_norm(), "identity gap {gap:e} λ={lambda} μ={mu}");
    }

    #[test]
    fn walsh_weights_ignore_common_shift(
        raw in prop::collection::vec(0.05f64..1.0, 2..7),
        alpha_seed in prop::collection::vec(-2.0f64..2.0, 7),
        c in -1.0f64..1.0,
    ) {
        let k = raw.len();
        let p = weights(&raw);
        let a = &alpha_seed[..k];
        let shifted: Vec<f64> = a.iter().map(|v| v + c).collect();
        let w = transform_walsh(&p, a).unwrap();
        let ws = transform_walsh(&p, &shifted).unwrap();
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        for (x, y) in w.iter().zip(&ws) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn skew_weight_moves_with_the_mass(p in 0.01f64..0.99, a in -3.0f64..3.0, da in 0.01f64..1.0) {
        let lo = transform_skew(p, a).unwrap().p;
        let hi = transform_skew(p, a + da).unwrap().p;
        prop_assert!(hi > lo);
        prop_assert!((transform_skew(p, 0.0).unwrap().p - p).abs() < 1e-14);
    }

    #[test]
    fn formatted_numbers_keep_twelve_digits(m in 1.0f64..10.0, e in -20i32..20, neg in any::<bool>()) {
        let v = if neg { -m } else { m } * 10f64.powi(e);
        let back: f64 = fmt_num(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 1e-11 * v.abs());
    }
}
