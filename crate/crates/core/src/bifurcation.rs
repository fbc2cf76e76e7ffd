//! Sweeps of `a8` recording local maxima of `x`, with optional state
//! continuation between grid points.

use rayon::prelude::*;

use crate::dynamics::{vector_field, Params, State3};
use crate::error::{Error, Result};
use crate::integrate::{integrate, local_maxima, IntegratorConfig, Trajectory};
use crate::lyapunov::{lyapunov_spectrum, LyapunovConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Increasing `a8`.
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IcPolicy {
    /// Every grid point starts from the same state.
    Fixed(State3),
    /// The first point starts here; later points start from the final state of
    /// the previous one.
    Continued(State3),
}

impl IcPolicy {
    pub fn seed(&self) -> State3 {
        match *self {
            Self::Fixed(s) | Self::Continued(s) => s,
        }
    }
}

/// Branch selection at the first grid point (in sweep order) with `a8 > 0`,
/// so the scan continues on the attractor at the seed's sign of `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignReset {
    Off,
    /// Negate the carried `x` when its sign differs from the seed's.
    FlipX,
    /// Use the symmetric image `(-x, -y, z)` of the carried state when its run
    /// leaves fewer maxima on the seed's side than the image's run. The image
    /// of a trajectory is a trajectory, so this picks the mirrored branch
    /// exactly. Unlike `FlipX` this is repeated at every `a8 > 0` point.
    Mirror,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub a8_start: f64,
    pub a8_end: f64,
    pub n_points: usize,
    pub direction: Direction,
    pub ic_policy: IcPolicy,
    pub t_end: f64,
    pub transient: f64,
    pub sign_reset: SignReset,
    /// Fixed RK4 step.
    pub step: f64,
    pub escape_radius: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            a8_start: -0.5,
            a8_end: 1.5,
            n_points: 400,
            direction: Direction::Forward,
            ic_policy: IcPolicy::Continued([-2.1441, -0.3086, 0.1113]),
            t_end: 300.0,
            transient: 150.0,
            sign_reset: SignReset::Mirror,
            step: 0.005,
            escape_radius: 1e6,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 || !(self.a8_end > self.a8_start) {
            return Err(Error::InvalidConfig(
                "sweep needs n_points >= 2 and a8_end > a8_start".into(),
            ));
        }
        if !(self.transient >= 0.0) || !(self.transient < self.t_end) || !(self.step > 0.0) {
            return Err(Error::InvalidConfig(
                "sweep needs 0 <= transient < t_end and step > 0".into(),
            ));
        }
        Ok(())
    }

    /// Grid values in sweep order.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.n_points;
        let mut g: Vec<f64> = (0..n)
            .map(|k| self.a8_start + (self.a8_end - self.a8_start) * k as f64 / (n - 1) as f64)
            .collect();
        if self.direction == Direction::Backward {
            g.reverse();
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointSummary {
    pub a8: f64,
    pub maxima: usize,
    pub escaped: bool,
    pub initial_state: State3,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BifurcationData {
    /// `(a8, local maximum of x)` in sweep order.
    pub rows: Vec<(f64, f64)>,
    pub points: Vec<PointSummary>,
}

impl BifurcationData {
    pub fn maxima_at(&self, a8: f64) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().filter(move |r| r.0 == a8).map(|r| r.1)
    }
}

pub fn bifurcation_scan(p: &Params, cfg: &SweepConfig) -> Result<BifurcationData> {
    p.validate()?;
    cfg.validate()?;
    let icfg = IntegratorConfig::fixed(cfg.step, cfg.t_end)
        .with_transient(cfg.transient)
        .with_escape_radius(cfg.escape_radius);
    let seed = cfg.ic_policy.seed();
    let mut carried = seed;
    let mut reset_done = false;
    let mut rows = Vec::new();
    let mut points = Vec::with_capacity(cfg.n_points);

    for a8 in cfg.grid() {
        let mut s0 = match cfg.ic_policy {
            IcPolicy::Fixed(s) => s,
            IcPolicy::Continued(_) => carried,
        };
        let pa = p.with_a8(a8);
        let run = |s0: State3| integrate(|s| vector_field(&pa, s), s0, &icfg, &[]);
        let mut pending = None;
        if a8 > 0.0 && !reset_done {
            reset_done = true;
            match cfg.sign_reset {
                SignReset::Off => {}
                SignReset::FlipX => {
                    if s0[0] * seed[0] < 0.0 {
                        s0[0] = -s0[0];
                    }
                }
                SignReset::Mirror => {
                    let on_side = |t: &Trajectory<3>| {
                        local_maxima(t, 0).iter().filter(|m| m.1 * seed[0] > 0.0).count()
                    };
                    let direct = run(s0)?;
                    let image = [-s0[0], -s0[1], s0[2]];
                    let mirrored = run(image)?;
                    let chosen = if !mirrored.escaped()
                        && (direct.escaped() || on_side(&mirrored) > on_side(&direct))
                    {
                        s0 = image;
                        mirrored
                    } else {
                        direct
                    };
                    // runs inside the merged window switch sides after long
                    // residences, so the choice is renewed at every a8 > 0
                    reset_done = false;
                    pending = Some(chosen);
                }
            }
        }
        let traj = match pending {
            Some(t) => t,
            None => run(s0)?,
        };
        if traj.escaped() {
            points.push(PointSummary {
                a8,
                maxima: 0,
                escaped: true,
                initial_state: s0,
            });
            carried = seed;
            continue;
        }
        let maxima = local_maxima(&traj, 0);
        rows.extend(maxima.iter().map(|&(_, v)| (a8, v)));
        points.push(PointSummary {
            a8,
            maxima: maxima.len(),
            escaped: false,
            initial_state: s0,
        });
        if let Some(last) = traj.last_state() {
            carried = *last;
        }
    }
    Ok(BifurcationData { rows, points })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaosPoint {
    pub a8: f64,
    /// `NaN` when the run escaped.
    pub l1: f64,
    pub chaotic: bool,
    pub escaped: bool,
}

/// Threshold on the largest exponent.
pub const CHAOS_THRESHOLD: f64 = 0.01;

/// Short Lyapunov run (1e5 steps of 0.01) at each grid value; points run in
/// parallel.
pub fn chaos_mask(p: &Params, a8_grid: &[f64], s0: State3) -> Result<Vec<ChaosPoint>> {
    let cfg = LyapunovConfig {
        iterations: 100_000,
        ..LyapunovConfig::default()
    };
    chaos_mask_with(p, a8_grid, s0, &cfg)
}

pub fn chaos_mask_with(
    p: &Params,
    a8_grid: &[f64],
    s0: State3,
    cfg: &LyapunovConfig,
) -> Result<Vec<ChaosPoint>> {
    p.validate()?;
    cfg.validate()?;
    a8_grid
        .par_iter()
        .map(|&a8| match lyapunov_spectrum(&p.with_a8(a8), s0, cfg) {
            Ok(run) => Ok(ChaosPoint {
                a8,
                l1: run.exponents[0],
                chaotic: run.exponents[0] > CHAOS_THRESHOLD,
                escaped: false,
            }),
            Err(Error::Escaped { .. }) => Ok(ChaosPoint {
                a8,
                l1: f64::NAN,
                chaotic: false,
                escaped: true,
            }),
            Err(e) => Err(e),
        })
        .collect()
}
