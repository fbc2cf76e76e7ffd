//! Lyapunov spectrum from the variational equations.
//!
//! The state is advanced together with three tangent vectors driven by the
//! Jacobian (a 12-dimensional RK4 system). The frame is re-orthonormalized by
//! modified Gram–Schmidt and the logarithms of the stretching factors are
//! averaged over time.

use crate::dynamics::{divergence, jacobian, vector_field, Matrix3, Params, State3};
use crate::error::{Error, Result};
use crate::integrate::{norm, rk4_step, Trajectory};

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovConfig {
    pub step: f64,
    pub iterations: u64,
    /// Steps between re-orthonormalizations.
    pub renorm_interval: u64,
    /// Time integrated before exponents accumulate.
    pub transient: f64,
    pub escape_radius: f64,
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        Self {
            step: 0.01,
            iterations: 1_000_000,
            renorm_interval: 1,
            transient: 100.0,
            escape_radius: 1e6,
        }
    }
}

impl LyapunovConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || self.iterations == 0 || self.renorm_interval == 0 {
            return Err(Error::InvalidConfig(
                "lyapunov run needs step > 0, iterations > 0, renorm_interval > 0".into(),
            ));
        }
        if !(self.transient >= 0.0) {
            return Err(Error::InvalidConfig("transient must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// Time since accumulation started.
    pub t: f64,
    pub exponents: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct LyapunovRun {
    /// Sorted descending, in nats per unit time.
    pub exponents: [f64; 3],
    /// Running estimates at log-spaced times; the last entry equals `exponents`.
    pub trace: Vec<TracePoint>,
    /// Time average of the Jacobian trace over the same accumulation window.
    pub mean_divergence: f64,
    pub initial_state: State3,
    pub final_state: State3,
    pub config: LyapunovConfig,
}

impl LyapunovRun {
    pub fn sum(&self) -> f64 {
        self.exponents.iter().sum()
    }

    pub fn kaplan_yorke(&self) -> f64 {
        kaplan_yorke(&self.exponents)
    }
}

fn sorted_desc(mut e: [f64; 3]) -> [f64; 3] {
    e.sort_by(|a, b| b.total_cmp(a));
    e
}

fn trace3(m: &Matrix3) -> f64 {
    m[0][0] + m[1][1] + m[2][2]
}

/// Orthonormalizes the three tangent columns stored in `aug[3..12]` in place
/// and returns the logarithms of the stretching factors.
fn gram_schmidt(aug: &mut [f64; 12]) -> [f64; 3] {
    let mut logs = [0.0; 3];
    for k in 0..3 {
        let (head, tail) = aug.split_at_mut(3 + 3 * k);
        let v = &mut tail[..3];
        for j in 0..k {
            let u = &head[3 + 3 * j..6 + 3 * j];
            let dot: f64 = (0..3).map(|i| v[i] * u[i]).sum();
            for i in 0..3 {
                v[i] -= dot * u[i];
            }
        }
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        logs[k] = n.ln();
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    logs
}

/// Spectrum of an arbitrary 3-D field given its Jacobian.
pub fn spectrum_with<F, J>(field: F, jac: J, s0: State3, cfg: &LyapunovConfig) -> Result<LyapunovRun>
where
    F: Fn(&State3) -> State3,
    J: Fn(&State3) -> Matrix3,
{
    cfg.validate()?;
    let h = cfg.step;
    let escape = |t: f64, s: &State3| -> Result<()> {
        let r = norm(s);
        if r.is_finite() && r <= cfg.escape_radius {
            Ok(())
        } else {
            Err(Error::Escaped { t, norm: r })
        }
    };

    let mut s = s0;
    let n_transient = (cfg.transient / h).round() as u64;
    for k in 0..n_transient {
        s = rk4_step(&field, &s, h);
        escape((k + 1) as f64 * h, &s)?;
    }

    let augmented = |a: &[f64; 12]| -> [f64; 12] {
        let st = [a[0], a[1], a[2]];
        let f = field(&st);
        let m = jac(&st);
        let mut out = [0.0; 12];
        out[..3].copy_from_slice(&f);
        for k in 0..3 {
            let v = &a[3 + 3 * k..6 + 3 * k];
            for i in 0..3 {
                out[3 + 3 * k + i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
            }
        }
        out
    };

    let mut aug = [0.0; 12];
    aug[..3].copy_from_slice(&s);
    aug[3] = 1.0;
    aug[7] = 1.0;
    aug[11] = 1.0;

    let mut sums = [0.0; 3];
    let mut div_integral = 0.0;
    let mut div_prev = trace3(&jac(&s));
    let mut trace = Vec::new();
    let mut next_record = 1u64;

    for k in 1..=cfg.iterations {
        aug = rk4_step(&augmented, &aug, h);
        let st = [aug[0], aug[1], aug[2]];
        let t_total = cfg.transient + k as f64 * h;
        escape(t_total, &st)?;
        let div = trace3(&jac(&st));
        div_integral += 0.5 * h * (div_prev + div);
        div_prev = div;

        if k % cfg.renorm_interval == 0 || k == cfg.iterations {
            let logs = gram_schmidt(&mut aug);
            for i in 0..3 {
                sums[i] += logs[i];
            }
        }
        if k >= next_record || k == cfg.iterations {
            let t = k as f64 * h;
            trace.push(TracePoint {
                t,
                exponents: sorted_desc(sums.map(|v| v / t)),
            });
            next_record = (k + 1).max((k as f64 * 1.02).ceil() as u64);
        }
    }

    let t = cfg.iterations as f64 * h;
    let exponents = sorted_desc(sums.map(|v| v / t));
    if let Some(last) = trace.last_mut() {
        last.exponents = exponents;
    }
    Ok(LyapunovRun {
        exponents,
        trace,
        mean_divergence: div_integral / t,
        initial_state: s0,
        final_state: [aug[0], aug[1], aug[2]],
        config: cfg.clone(),
    })
}

pub fn lyapunov_spectrum(p: &Params, s0: State3, cfg: &LyapunovConfig) -> Result<LyapunovRun> {
    p.validate()?;
    spectrum_with(|s| vector_field(p, s), |s| jacobian(p, s), s0, cfg)
}

/// Kaplan–Yorke dimension of a spectrum sorted in descending order.
///
/// `j` is the largest count whose partial sum stays non-negative; the result is
/// `j + (L1 + .. + Lj) / |L(j+1)|`, `0` if `L1 < 0` and the phase-space
/// dimension if every partial sum is non-negative.
pub fn kaplan_yorke(exponents: &[f64]) -> f64 {
    let mut sum = 0.0;
    for (j, &l) in exponents.iter().enumerate() {
        if sum + l < 0.0 {
            return j as f64 + sum / l.abs();
        }
        sum += l;
    }
    exponents.len() as f64
}

/// Time-weighted (trapezoidal) mean of the divergence along a trajectory.
pub fn divergence_time_average(p: &Params, traj: &Trajectory<3>) -> f64 {
    match traj.len() {
        0 => f64::NAN,
        1 => divergence(p, &traj.states[0]),
        _ => {
            let mut integral = 0.0;
            for (w, s) in traj.times.windows(2).zip(traj.states.windows(2)) {
                integral += 0.5 * (w[1] - w[0]) * (divergence(p, &s[0]) + divergence(p, &s[1]));
            }
            integral / (traj.times[traj.len() - 1] - traj.times[0])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrate::{integrate, IntegratorConfig};

    #[test]
    fn kaplan_yorke_cases() {
        assert!((kaplan_yorke(&[0.475, 0.0, -5.509]) - 2.086).abs() < 5e-4);
        assert_eq!(kaplan_yorke(&[-1.0, -2.0, -3.0]), 0.0);
        assert_eq!(kaplan_yorke(&[0.0, -1.0, -2.0]), 1.0);
        assert_eq!(kaplan_yorke(&[0.1, 0.0, 0.0]), 3.0);
    }

    #[test]
    fn diagonal_linear_field() {
        let cfg = LyapunovConfig {
            step: 0.01,
            iterations: 2000,
            transient: 0.0,
            escape_radius: f64::INFINITY,
            ..Default::default()
        };
        let run = spectrum_with(
            |s| [s[0], -2.0 * s[1], -3.0 * s[2]],
            |_| [[1.0, 0.0, 0.0], [0.0, -2.0, 0.0], [0.0, 0.0, -3.0]],
            [0.0, 0.0, 0.0],
            &cfg,
        )
        .unwrap();
        for (got, want) in run.exponents.iter().zip([1.0, -2.0, -3.0]) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
        assert!((run.mean_divergence + 4.0).abs() < 1e-12);
        assert_eq!(run.trace.last().unwrap().exponents, run.exponents);
    }

    #[test]
    fn escape_aborts() {
        let cfg = LyapunovConfig {
            iterations: 10_000,
            transient: 0.0,
            escape_radius: 1e3,
            ..Default::default()
        };
        let r = spectrum_with(|s| [s[0], 0.0, 0.0], |_| [[1.0, 0.0, 0.0], [0.0; 3], [0.0; 3]], [1.0, 0.0, 0.0], &cfg);
        assert!(matches!(r, Err(Error::Escaped { .. })));
    }

    #[test]
    fn constant_divergence_when_state_dependence_cancels() {
        let p = Params::chaotic().with_a8(-0.5);
        let cfg = IntegratorConfig::fixed(0.01, 20.0);
        let traj = integrate(|s| vector_field(&p, s), [1.0, -1.0, 0.0], &cfg, &[]).unwrap();
        let avg = divergence_time_average(&p, &traj);
        assert!((avg + (1.0 - 2.0 + 6.0)).abs() < 1e-12);
    }

    #[test]
    fn gram_schmidt_orthonormal() {
        let mut aug = [0.0, 0.0, 0.0, 2.0, 0.0, 0.0, 1.0, 3.0, 0.0, 1.0, 1.0, 4.0];
        let logs = gram_schmidt(&mut aug);
        assert!((logs[0] - 2f64.ln()).abs() < 1e-15);
        assert!((logs[1] - 3f64.ln()).abs() < 1e-15);
        assert!((logs[2] - 4f64.ln()).abs() < 1e-15);
        for a in 0..3 {
            for b in 0..3 {
                let dot: f64 = (0..3).map(|i| aug[3 + 3 * a + i] * aug[3 + 3 * b + i]).sum();
                assert!((dot - if a == b { 1.0 } else { 0.0 }).abs() < 1e-15);
            }
        }
    }
}
