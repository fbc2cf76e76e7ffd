//! Results checked against independent computations: closed forms, matrix
//! exponentials, finer integrations and synthetic data.

use approx::assert_relative_eq;
use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use chaoslab_core::basin::fit_power_law;
use chaoslab_core::circuit::{circuit_field, realized_params, synthesize, Rounding};
use chaoslab_core::dynamics::{divergence, jacobian, scaled_field, vector_field};
use chaoslab_core::integrate::{integrate, rk4_step, EventSpec, IntegratorConfig};
use chaoslab_core::lyapunov::{lyapunov_spectrum, spectrum_with, LyapunovConfig};
use chaoslab_core::robot::{simulate_navigation, BoundaryRule, NavigationConfig, RobotConfig};
use chaoslab_core::{Params, ScaleSpec, State3};

const A: Params = Params::chaotic();

fn dist(a: &State3, b: &State3) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// Log volume growth over one time unit: the sum of the per-step stretching
/// logs must equal the integral of the divergence, here integrated as an
/// extra state with a much finer step.
#[test]
fn stretching_logs_match_liouville_integral() {
    let s0 = [0.1001, 0.1003, 0.1003];
    let cfg = LyapunovConfig {
        step: 0.01,
        iterations: 100,
        transient: 0.0,
        ..LyapunovConfig::default()
    };
    let run = lyapunov_spectrum(&A, s0, &cfg).unwrap();
    let log_volume = run.sum() * 1.0;

    let aug = |a: &[f64; 4]| {
        let f = vector_field(&A, &[a[0], a[1], a[2]]);
        [f[0], f[1], f[2], divergence(&A, &[a[0], a[1], a[2]])]
    };
    let mut a = [s0[0], s0[1], s0[2], 0.0];
    for _ in 0..10_000 {
        a = rk4_step(&aug, &a, 1e-4);
    }
    assert!((log_volume - a[3]).abs() < 1e-6, "{log_volume} vs {}", a[3]);
    // the divergence mean is a trapezoid rule on the 0.01 grid
    assert!((run.mean_divergence - a[3]).abs() < 1e-4);
}

fn linear_system() -> Matrix3<f64> {
    Matrix3::new(-0.3, 1.2, 0.0, -1.2, -0.3, 0.5, 0.0, 0.0, 0.4)
}

#[test]
fn linear_flow_matches_matrix_exponential() {
    let m = linear_system();
    let field = |s: &State3| {
        let v = m * nalgebra::Vector3::from_column_slice(s);
        [v[0], v[1], v[2]]
    };
    let s0 = [1.0, -0.5, 0.25];
    let exact = (m * 1.0).exp() * nalgebra::Vector3::from_column_slice(&s0);
    let exact = [exact[0], exact[1], exact[2]];
    for cfg in [
        IntegratorConfig::fixed(0.001, 1.0),
        IntegratorConfig::adaptive(1e-11, 1e-13, 0.1, 1.0),
    ] {
        let traj = integrate(field, s0, &cfg, &[]).unwrap();
        assert_relative_eq!(*traj.times.last().unwrap(), 1.0, epsilon = 1e-12);
        let got = traj.last_state().unwrap();
        assert!(dist(got, &exact) < 1e-8, "{cfg:?}: {got:?} vs {exact:?}");
    }
}

/// Exponents of a linear flow are the real parts of its eigenvalues.
#[test]
fn linear_spectrum_is_eigenvalue_real_parts() {
    let m = linear_system();
    let jm = [
        [m[(0, 0)], m[(0, 1)], m[(0, 2)]],
        [m[(1, 0)], m[(1, 1)], m[(1, 2)]],
        [m[(2, 0)], m[(2, 1)], m[(2, 2)]],
    ];
    let cfg = LyapunovConfig {
        step: 0.01,
        iterations: 100_000,
        transient: 0.0,
        ..LyapunovConfig::default()
    };
    // the state itself grows; only the tangent dynamics matter, so start at 0
    let run = spectrum_with(
        |s: &State3| {
            let v = m * nalgebra::Vector3::from_column_slice(s);
            [v[0], v[1], v[2]]
        },
        |_| jm,
        [0.0; 3],
        &cfg,
    )
    .unwrap();
    let mut re: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    for (l, r) in run.exponents.iter().zip(&re) {
        assert!((l - r).abs() < 5e-3, "{:?} vs {re:?}", run.exponents);
    }
}

/// Each coarse step is re-integrated from its own start with ten substeps, so
/// the dense series follows the coarse path instead of drifting off it.
#[test]
fn event_maxima_match_dense_resampling() {
    let h = 0.01;
    let field = |s: &State3| vector_field(&A, s);
    let coarse = integrate(
        field,
        [1.0, -1.0, 0.0],
        &IntegratorConfig::fixed(h, 30.0),
        &[EventSpec::LocalMax { coord: 0 }],
    )
    .unwrap();
    let mut times = Vec::new();
    let mut xs = Vec::new();
    for (t, s) in coarse.times.iter().zip(&coarse.states) {
        let mut w = *s;
        for k in 0..10 {
            times.push(t + k as f64 * h / 10.0);
            xs.push(w[0]);
            w = rk4_step(&field, &w, h / 10.0);
        }
    }
    let dense: Vec<(f64, f64)> = (1..xs.len() - 1)
        .filter(|&k| xs[k - 1] < xs[k] && xs[k] >= xs[k + 1])
        .map(|k| (times[k], xs[k]))
        .collect();
    assert!(coarse.events.len() > 10);
    assert_eq!(coarse.events.len(), dense.len());
    for (e, (t, v)) in coarse.events.iter().zip(&dense) {
        assert!((e.t - t).abs() < h, "time {} vs {t}", e.t);
        assert!((e.state[0] - v).abs() < 1e-4 * v.abs(), "value {} vs {v}", e.state[0]);
    }
}

#[test]
fn adaptive_error_shrinks_with_tolerance() {
    let s0 = [1.0, -1.0, 0.0];
    let t_end = 5.0;
    let reference = *integrate(|s| vector_field(&A, s), s0, &IntegratorConfig::fixed(1e-4, t_end), &[])
        .unwrap()
        .last_state()
        .unwrap();
    let errors: Vec<f64> = [1e-5, 1e-7, 1e-9]
        .iter()
        .map(|&tol| {
            let cfg = IntegratorConfig::adaptive(tol, tol * 1e-2, 0.1, t_end);
            let traj = integrate(|s| vector_field(&A, s), s0, &cfg, &[]).unwrap();
            dist(traj.last_state().unwrap(), &reference)
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[2] < 1e-6, "{errors:?}");
}

#[test]
fn nearby_starts_separate_quickly() {
    let cfg = IntegratorConfig::fixed(0.01, 50.0);
    let a = integrate(|s| vector_field(&A, s), [1.0, -1.0, 0.0], &cfg, &[]).unwrap();
    let b = integrate(|s| vector_field(&A, s), [1.0, -1.0, 0.001], &cfg, &[]).unwrap();
    let max = a.states.iter().zip(&b.states).map(|(u, v)| dist(u, v)).fold(0.0, f64::max);
    assert!(max > 1.0, "max separation {max}");
}

/// The scaled field is the chain rule applied to `x = s1 wx` etc.
#[test]
fn scaled_field_is_substitution() {
    let sc = ScaleSpec { s1: 3.0, s2: 0.7, s3: 2.5, kappa: 1.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let w: State3 = std::array::from_fn(|_| rng.random_range(-4.0..4.0));
        let f = vector_field(&A, &sc.from_scaled(&w));
        let g = scaled_field(&A, &sc, &w);
        let chain = [f[0] / sc.s1, f[1] / sc.s2, f[2] / sc.s3];
        for k in 0..3 {
            assert_relative_eq!(g[k], chain[k], epsilon = 1e-12, max_relative = 1e-12);
        }
    }
}

#[test]
fn unrounded_circuit_is_the_scaled_system() {
    for p in [A, Params::multistable()] {
        let sc = ScaleSpec::default();
        let cr = synthesize(&p, &sc, 1e-9, Rounding::None).unwrap();
        let (realized, errors) = realized_params(&cr);
        for (r, t) in realized.to_array().iter().zip(p.to_array()) {
            assert_relative_eq!(*r, t, max_relative = 1e-12);
        }
        assert!(errors.iter().all(|e| *e < 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let w: State3 = std::array::from_fn(|_| rng.random_range(-10.0..10.0));
            let a = circuit_field(&cr, &w);
            let b = scaled_field(&p, &sc, &w);
            for k in 0..3 {
                assert!((a[k] - b[k]).abs() <= 1e-12 * (1.0 + b[k].abs()));
            }
        }
    }
}

#[test]
fn jacobian_eigenvalues_at_origin_are_the_linear_rates() {
    let j = jacobian(&A, &[0.0; 3]);
    let m = Matrix3::from_fn(|r, c| j[r][c]);
    let mut re: Vec<f64> = m.complex_eigenvalues().iter().map(|z| z.re).collect();
    re.sort_by(f64::total_cmp);
    assert_eq!(re, vec![-A.a6, -A.a1, A.a4]);
}

fn robot_run(start: (f64, f64), boundary: BoundaryRule) -> chaoslab_core::robot::Navigation {
    let cfg = RobotConfig {
        xmax: 31.6,
        boundary,
        ..RobotConfig::default()
    };
    simulate_navigation(
        &A,
        &cfg,
        [0.1, -0.1, 0.0, start.0, start.1, 0.0],
        &NavigationConfig::default(),
    )
    .unwrap()
}

#[test]
fn robot_chaotic_substate_is_the_standalone_run() {
    let nav = robot_run((5.0, 5.0), BoundaryRule::NoMotion);
    let nc = NavigationConfig::default();
    let mut s: State3 = [0.1, -0.1, 0.0];
    let mut k = 0;
    for (t, st) in nav.trajectory.times.iter().zip(&nav.trajectory.states) {
        let target = (t / nc.step).round() as usize;
        while k < target {
            s = rk4_step(&|w: &State3| vector_field(&A, w), &s, nc.step);
            k += 1;
        }
        assert_eq!([st[0], st[1], st[2]], s, "at t = {t}");
    }
}

#[test]
fn robot_stays_inside_and_respects_heading() {
    let cfg = RobotConfig { xmax: 31.6, ..RobotConfig::default() };
    let nav = robot_run((5.0, 5.0), BoundaryRule::NoMotion);
    assert!(nav.blocked_steps > 0);
    for s in &nav.trajectory.states {
        assert!(cfg.contains(s[3], s[4]), "{s:?}");
        let f = chaoslab_core::dynamics::robot_field(&A, cfg.d, cfg.xmax, s);
        assert!((f[3] * s[5].sin() - f[4] * s[5].cos()).abs() < 1e-12);
    }
    assert!(nav.coverage.series.windows(2).all(|w| w[1].1 >= w[0].1));
}

/// Speed and heading read only the chaotic state, so without walls a shifted
/// start gives a rigidly translated path.
#[test]
fn offset_starts_translate_without_walls() {
    let a = robot_run((5.0, 5.0), BoundaryRule::None);
    let b = robot_run((5.1, 5.0), BoundaryRule::None);
    for (u, v) in a.trajectory.states.iter().zip(&b.trajectory.states) {
        assert!((v[3] - u[3] - 0.1).abs() < 1e-8 && (v[4] - u[4]).abs() < 1e-8);
        assert_eq!(u[5], v[5]);
    }
}

/// Bernoulli draws around `P = 0.38 r^-0.051`.
#[test]
fn synthetic_power_law_is_recovered() {
    let (gamma, p0) = (0.051, 0.38);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let radii: Vec<f64> = (1..=6).map(|k| 10f64.powi(3 * k)).collect();
    let n = 100_000;
    let probs: Vec<f64> = radii
        .iter()
        .map(|r| {
            let p = p0 * r.powf(-gamma);
            (0..n).filter(|_| rng.random_bool(p)).count() as f64 / n as f64
        })
        .collect();
    let fit = fit_power_law(&radii, &probs, 3.0).unwrap();
    assert!((fit.gamma - gamma).abs() <= 0.005, "gamma {}", fit.gamma);
    assert!((fit.p0 - p0).abs() <= 0.02, "p0 {}", fit.p0);
    assert_eq!(fit.class.map(|c| c.number()), Some(3));
}
