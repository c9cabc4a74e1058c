mod common;

use common::*;
use scirs::integrator::*;
use scirs::stability::{build_q, find_diagonal_d, lyapunov_v, LyapunovWeights};
use scirs::{presets, Compartments, StateMir};

/// Least-squares slope of log(error) against log(h) on `N' = A − μN`.
fn population_error_slope(big_a: f64, mu: f64, n0: f64, t: f64) -> (f64, Vec<f64>) {
    let hs = [1e-1, 5e-2, 2.5e-2, 1.25e-2];
    let exact = big_a / mu + (n0 - big_a / mu) * (-mu * t).exp();
    let errors: Vec<f64> = hs
        .iter()
        .map(|&h| {
            let cfg = IntegrationConfig {
                h,
                t_end: t,
                record_stride: 1,
                convergence_tol: 0.0,
            };
            let traj = integrate(|x: &[f64; 1]| [big_a - mu * x[0]], [n0], &cfg, None).unwrap();
            (traj.terminal[0] - exact).abs()
        })
        .collect();
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = ys.iter().sum::<f64>() / 4.0;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (num / den, errors)
}

#[test]
fn fourth_order_convergence_on_population_equation() {
    let (slope, errors) = population_error_slope(2.0, 1.0, 0.0, 2.0);
    assert!(
        (slope - 4.0).abs() <= 0.1,
        "slope {slope}, errors {errors:?}"
    );
    for w in errors.windows(2) {
        let ratio = w[0] / w[1];
        assert!((ratio - 16.0).abs() < 1.5, "ratio {ratio}");
    }
}

#[test]
fn sampler_mean_matches_simplex_mean() {
    let p = presets::case1();
    let n = p.carrying_population();
    let states = sample_omega(&p, 1000, 31);
    let mean = states.iter().map(|s| s.s + s.c + s.i).sum::<f64>() / 1000.0;
    assert!((mean - 0.75 * n).abs() <= 0.05 * 0.75 * n, "mean {mean}");
    // each coordinate of a uniform point in the 3-simplex has mean 1/4
    let mean_s = states.iter().map(|s| s.s).sum::<f64>() / 1000.0;
    assert!((mean_s - 0.25 * n).abs() <= 0.1 * 0.25 * n);
}

#[test]
fn full_system_reaches_endemic_state_from_published_start() {
    let p = presets::case1();
    let e = p.dee().unwrap().to_full(&p).to_array();
    let cfg = IntegrationConfig::default();
    let traj = integrate(
        full_field(p),
        [150.0, 20.0, 20.0, 10.0, 200.0],
        &cfg,
        Some(&e),
    )
    .unwrap();
    let t = traj.converged_at.expect("converged");
    assert!(t > 0.0 && t < cfg.t_end);
    assert_eq!(converge_time(&traj, &e, 1e-3), Some(t));
    let err = traj
        .terminal
        .iter()
        .zip(&e)
        .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
    assert!(err <= 1e-3, "terminal error {err}");
}

#[test]
fn lyapunov_function_decreases_along_trajectories() {
    let p = presets::case1();
    let q = build_q(&p);
    let d = find_diagonal_d(&q, 9, 100_000).unwrap();
    let w = LyapunovWeights::from_certificate(d).unwrap();
    let e = p.transformed_dee().unwrap().to_array();
    let cfg = IntegrationConfig {
        h: 1e-2,
        t_end: 800.0,
        record_stride: 100,
        convergence_tol: 0.0,
    };
    for s0 in sample_omega(&p, 6, 4) {
        let m0 = p.to_mir(&s0.to_sir(&p));
        let traj = integrate(mir_field(p), m0.to_array(), &cfg, None).unwrap();
        let mut prev = f64::INFINITY;
        for x in &traj.states {
            let dist = x
                .iter()
                .zip(&e)
                .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
            if dist <= 1e-6 {
                break;
            }
            let v = lyapunov_v(&p, &w, &StateMir::from_array(*x)).unwrap();
            assert!(v < prev, "V increased: {prev} -> {v}");
            prev = v;
        }
    }
}
