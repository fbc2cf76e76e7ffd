//! Differential-drive robot steered by the chaotic states.
//!
//! The 6-D state is `(x, y, z, X, Y, theta)`. The first three components follow
//! the chaotic field untouched; the pose integrates
//! `X' = v cos(theta)`, `Y' = v sin(theta)`, `theta' = mu` with
//! `v = mod(|x + y|, xmax) / 2` and `mu = (x - y) / d`.

use crate::dynamics::{robot_field, vector_field, Params, State3, State6};
use crate::error::{Error, Result};
use crate::integrate::{rk4_step, Trajectory};

/// Forward speed and turn rate from the chaotic pair `(x, y)`.
pub fn drive_law(x: f64, y: f64, d: f64, xmax: f64) -> (f64, f64) {
    ((x + y).abs().rem_euclid(xmax) / 2.0, (x - y) / d)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryRule {
    None,
    /// A step that would leave the workspace keeps its rotation but not its
    /// translation.
    NoMotion,
}

impl BoundaryRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "none" => Some(Self::None),
            "no-motion" => Some(Self::NoMotion),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::NoMotion => "no-motion",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RobotConfig {
    /// Wheel separation.
    pub d: f64,
    pub wheel_radius: f64,
    /// Wrap amplitude of the forward-speed law.
    pub xmax: f64,
    /// `(x_lo, x_hi, y_lo, y_hi)`.
    pub workspace: (f64, f64, f64, f64),
    pub nx: usize,
    pub ny: usize,
    pub boundary: BoundaryRule,
}

impl Default for RobotConfig {
    /// `xmax` here is a placeholder; use [`RobotConfig::calibrated`] for a
    /// parameter set.
    fn default() -> Self {
        Self {
            d: 0.08,
            wheel_radius: 1.0,
            xmax: 1.0,
            workspace: (0.0, 10.0, 0.0, 10.0),
            nx: 10,
            ny: 10,
            boundary: BoundaryRule::NoMotion,
        }
    }
}

impl RobotConfig {
    /// Defaults with `xmax` measured on a reference run of `p`.
    pub fn calibrated(p: &Params) -> Result<Self> {
        Ok(Self {
            xmax: calibrate_xmax(p)?,
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        let (x0, x1, y0, y1) = self.workspace;
        if !(self.d > 0.0) || !(self.xmax > 0.0) || !(self.wheel_radius > 0.0) {
            return Err(Error::InvalidConfig(
                "robot needs d > 0, xmax > 0, wheel_radius > 0".into(),
            ));
        }
        if !(x1 > x0) || !(y1 > y0) || self.nx == 0 || self.ny == 0 {
            return Err(Error::InvalidConfig("workspace must be nondegenerate".into()));
        }
        Ok(())
    }

    pub fn contains(&self, x: f64, y: f64) -> bool {
        let (x0, x1, y0, y1) = self.workspace;
        x >= x0 && x <= x1 && y >= y0 && y <= y1
    }

    /// Coverage cell holding `(x, y)`; the upper edges belong to the last cells.
    pub fn cell(&self, x: f64, y: f64) -> Option<(usize, usize)> {
        if !self.contains(x, y) {
            return None;
        }
        let (x0, x1, y0, y1) = self.workspace;
        let i = (((x - x0) / (x1 - x0) * self.nx as f64) as usize).min(self.nx - 1);
        let j = (((y - y0) / (y1 - y0) * self.ny as f64) as usize).min(self.ny - 1);
        Some((i, j))
    }
}

/// `max |x(t)|` for `t` in `[50, 1050]` from `(0.1, -0.1, 0)`, fixed RK4 step 0.005.
pub fn calibrate_xmax(p: &Params) -> Result<f64> {
    p.validate()?;
    let h = 0.005;
    let mut s: State3 = [0.1, -0.1, 0.0];
    let mut xmax: f64 = 0.0;
    for k in 1..=210_000u32 {
        s = rk4_step(&|w: &State3| vector_field(p, w), &s, h);
        if !s.iter().all(|v| v.is_finite() && v.abs() < 1e6) {
            return Err(Error::Escaped {
                t: k as f64 * h,
                norm: s[0].hypot(s[1]).hypot(s[2]),
            });
        }
        if k > 10_000 {
            xmax = xmax.max(s[0].abs());
        }
    }
    Ok(xmax)
}

pub fn drive_inputs(x: f64, y: f64, cfg: &RobotConfig) -> (f64, f64) {
    drive_law(x, y, cfg.d, cfg.xmax)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WheelSpeeds {
    pub w_l: f64,
    pub w_r: f64,
}

/// Inverts `v = R (w_l + w_r) / 2`, `theta' = R (w_r - w_l) / d`.
pub fn wheel_speeds(v: f64, mu: f64, cfg: &RobotConfig) -> WheelSpeeds {
    let r = cfg.wheel_radius;
    WheelSpeeds {
        w_l: (2.0 * v - cfg.d * mu) / (2.0 * r),
        w_r: (2.0 * v + cfg.d * mu) / (2.0 * r),
    }
}

/// Forward speed and turn rate produced by a wheel pair.
pub fn body_rates(w: WheelSpeeds, cfg: &RobotConfig) -> (f64, f64) {
    let r = cfg.wheel_radius;
    (r * (w.w_l + w.w_r) / 2.0, r * (w.w_r - w.w_l) / cfg.d)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    /// Row-major `mask[j * nx + i]`.
    pub mask: Vec<bool>,
    pub nx: usize,
    pub ny: usize,
    /// `(t, fraction)` at each recorded sample.
    pub series: Vec<(f64, f64)>,
    pub final_fraction: f64,
}

impl CoverageReport {
    /// 0/1 grid, top row first, one line per row.
    pub fn mask_text(&self) -> String {
        let mut out = String::new();
        for j in (0..self.ny).rev() {
            let row: Vec<&str> = (0..self.nx)
                .map(|i| if self.mask[j * self.nx + i] { "1" } else { "0" })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }
}

/// Incremental visited-cell tracker.
#[derive(Debug, Clone)]
struct CoverageTracker {
    mask: Vec<bool>,
    visited: usize,
}

impl CoverageTracker {
    fn new(cfg: &RobotConfig) -> Self {
        Self {
            mask: vec![false; cfg.nx * cfg.ny],
            visited: 0,
        }
    }

    fn visit(&mut self, cfg: &RobotConfig, x: f64, y: f64) {
        if let Some((i, j)) = cfg.cell(x, y) {
            let m = &mut self.mask[j * cfg.nx + i];
            if !*m {
                *m = true;
                self.visited += 1;
            }
        }
    }

    fn fraction(&self) -> f64 {
        self.visited as f64 / self.mask.len() as f64
    }
}

/// Coverage of a sampled path; each `(t, X, Y)` sample marks its cell.
pub fn coverage(samples: &[(f64, f64, f64)], cfg: &RobotConfig) -> Result<CoverageReport> {
    cfg.validate()?;
    let mut tracker = CoverageTracker::new(cfg);
    let mut series = Vec::with_capacity(samples.len());
    for &(t, x, y) in samples {
        tracker.visit(cfg, x, y);
        series.push((t, tracker.fraction()));
    }
    Ok(CoverageReport {
        final_fraction: tracker.fraction(),
        mask: tracker.mask,
        nx: cfg.nx,
        ny: cfg.ny,
        series,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NavigationConfig {
    pub t_end: f64,
    pub step: f64,
    /// Every `record_every`-th step is stored; coverage is updated every step.
    pub record_every: usize,
}

impl Default for NavigationConfig {
    fn default() -> Self {
        Self {
            t_end: 500.0,
            step: 0.005,
            record_every: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Navigation {
    pub trajectory: Trajectory<6>,
    pub coverage: CoverageReport,
    /// Steps whose translation the boundary rule suppressed.
    pub blocked_steps: usize,
}

/// Fixed-step RK4 on the 6-D field. The chaotic components are advanced by the
/// same arithmetic as a standalone 3-D run, so they match it bit for bit.
pub fn simulate_navigation(
    p: &Params,
    cfg: &RobotConfig,
    s0: State6,
    nav: &NavigationConfig,
) -> Result<Navigation> {
    p.validate()?;
    cfg.validate()?;
    if !(nav.step > 0.0) || !(nav.t_end > 0.0) || nav.record_every == 0 {
        return Err(Error::InvalidConfig(
            "navigation needs step > 0, t_end > 0, record_every > 0".into(),
        ));
    }
    if cfg.boundary == BoundaryRule::NoMotion && !cfg.contains(s0[3], s0[4]) {
        return Err(Error::InvalidConfig(
            "initial position lies outside the workspace".into(),
        ));
    }
    let field = |s: &State6| robot_field(p, cfg.d, cfg.xmax, s);
    let n_steps = (nav.t_end / nav.step).round() as usize;

    let mut tracker = CoverageTracker::new(cfg);
    tracker.visit(cfg, s0[3], s0[4]);
    let mut times = vec![0.0];
    let mut states = vec![s0];
    let mut series = vec![(0.0, tracker.fraction())];
    let mut blocked_steps = 0;

    let mut s = s0;
    for k in 1..=n_steps {
        let mut next = rk4_step(&field, &s, nav.step);
        if cfg.boundary == BoundaryRule::NoMotion && !cfg.contains(next[3], next[4]) {
            next[3] = s[3];
            next[4] = s[4];
            blocked_steps += 1;
        }
        if !next.iter().all(|v| v.is_finite()) {
            return Err(Error::Escaped {
                t: k as f64 * nav.step,
                norm: f64::INFINITY,
            });
        }
        s = next;
        tracker.visit(cfg, s[3], s[4]);
        if k % nav.record_every == 0 || k == n_steps {
            let t = k as f64 * nav.step;
            times.push(t);
            states.push(s);
            series.push((t, tracker.fraction()));
        }
    }

    Ok(Navigation {
        trajectory: Trajectory::from_samples(times, states),
        coverage: CoverageReport {
            final_fraction: tracker.fraction(),
            mask: tracker.mask,
            nx: cfg.nx,
            ny: cfg.ny,
            series,
        },
        blocked_steps,
    })
}

/// Drive inputs at every sample, in trajectory order.
pub fn drive_series(traj: &Trajectory<6>, cfg: &RobotConfig) -> Vec<(f64, f64)> {
    traj.states
        .iter()
        .map(|s| drive_inputs(s[0], s[1], cfg))
        .collect()
}
