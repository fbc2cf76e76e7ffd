//! Explicit Runge–Kutta integration of autonomous fields.
//!
//! Two modes share one driver: classical RK4 with a constant step, and the
//! Dormand–Prince 5(4) embedded pair with step-size control. States are plain
//! `[f64; N]` arrays so the same code drives the 3-D system, the 6-D robot
//! system and the 12-D variational system.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fixed,
    Adaptive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub mode: Mode,
    /// Constant step (fixed mode) or initial step (adaptive mode).
    pub step: f64,
    pub max_step: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub t_end: f64,
    /// Samples and events before this time are not stored.
    pub transient: f64,
    pub escape_radius: f64,
}

impl Default for IntegratorConfig {
    /// Adaptive Dormand–Prince with maximum step `1e-3` and relative tolerance
    /// `2.2204e-6`, run to `t = 500` with the first 50 time units discarded.
    fn default() -> Self {
        Self {
            mode: Mode::Adaptive,
            step: 1e-3,
            max_step: 1e-3,
            rel_tol: 2.2204e-6,
            abs_tol: 1e-9,
            t_end: 500.0,
            transient: 50.0,
            escape_radius: 1e6,
        }
    }
}

impl IntegratorConfig {
    pub fn fixed(step: f64, t_end: f64) -> Self {
        Self {
            mode: Mode::Fixed,
            step,
            max_step: step,
            t_end,
            transient: 0.0,
            ..Self::default()
        }
    }

    pub fn adaptive(rel_tol: f64, abs_tol: f64, max_step: f64, t_end: f64) -> Self {
        Self {
            mode: Mode::Adaptive,
            step: max_step.min(1e-3),
            max_step,
            rel_tol,
            abs_tol,
            t_end,
            transient: 0.0,
            ..Self::default()
        }
    }

    pub fn with_transient(mut self, transient: f64) -> Self {
        self.transient = transient;
        self
    }

    pub fn with_escape_radius(mut self, radius: f64) -> Self {
        self.escape_radius = radius;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::InvalidConfig(msg.to_string()));
        if !(self.step > 0.0 && self.step <= self.max_step) {
            return fail("require 0 < step <= max_step");
        }
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) {
            return fail("require rel_tol > 0 and abs_tol >= 0");
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return fail("t_end must be positive and finite");
        }
        if !(self.transient >= 0.0 && self.transient < self.t_end) {
            return fail("require 0 <= transient < t_end");
        }
        if !(self.escape_radius > 0.0) {
            return fail("escape_radius must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
    Both,
}

impl Direction {
    fn admits(self, before: f64, after: f64, level: f64) -> bool {
        let up = before < level && after >= level;
        let down = before > level && after <= level;
        match self {
            Direction::Up => up,
            Direction::Down => down,
            Direction::Both => up || down,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EventSpec<const N: usize> {
    LocalMax {
        coord: usize,
    },
    PlaneCrossing {
        coord: usize,
        level: f64,
        direction: Direction,
    },
    /// Fires (and stops the integration) once the state has stayed within
    /// `radius` of `point` for `dwell` time units.
    Proximity {
        point: [f64; N],
        radius: f64,
        dwell: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event<const N: usize> {
    pub t: f64,
    pub state: [f64; N],
    /// Index into the event list passed to [`integrate`].
    pub spec: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Terminal {
    Completed,
    /// The step attempted at `t` left the escape ball; it is not stored.
    Escaped { t: f64, norm: f64 },
    /// A proximity event fired at `t`.
    Converged { t: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub terminal: Terminal,
    pub events: Vec<Event<N>>,
}

impl<const N: usize> Trajectory<N> {
    pub fn from_samples(times: Vec<f64>, states: Vec<[f64; N]>) -> Self {
        assert_eq!(times.len(), states.len());
        Self {
            times,
            states,
            terminal: Terminal::Completed,
            events: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> Option<&[f64; N]> {
        self.states.last()
    }

    pub fn escaped(&self) -> bool {
        matches!(self.terminal, Terminal::Escaped { .. })
    }

    pub fn column(&self, coord: usize) -> impl Iterator<Item = f64> + '_ {
        self.states.iter().map(move |s| s[coord])
    }
}

#[inline]
pub(crate) fn norm<const N: usize>(s: &[f64; N]) -> f64 {
    s.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[inline]
fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    let mut out = *y;
    for i in 0..N {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        out[i] += h * acc;
    }
    out
}

/// One classical fourth-order Runge–Kutta step.
#[inline]
pub fn rk4_step<const N: usize, F>(field: &F, s: &[f64; N], h: f64) -> [f64; N]
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    let k1 = field(s);
    let k2 = field(&axpy(s, 0.5 * h, &[(1.0, &k1)]));
    let k3 = field(&axpy(s, 0.5 * h, &[(1.0, &k2)]));
    let k4 = field(&axpy(s, h, &[(1.0, &k3)]));
    let mut out = *s;
    for i in 0..N {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

mod dopri {
    pub const A21: f64 = 1.0 / 5.0;
    pub const A31: f64 = 3.0 / 40.0;
    pub const A32: f64 = 9.0 / 40.0;
    pub const A41: f64 = 44.0 / 45.0;
    pub const A42: f64 = -56.0 / 15.0;
    pub const A43: f64 = 32.0 / 9.0;
    pub const A51: f64 = 19372.0 / 6561.0;
    pub const A52: f64 = -25360.0 / 2187.0;
    pub const A53: f64 = 64448.0 / 6561.0;
    pub const A54: f64 = -212.0 / 729.0;
    pub const A61: f64 = 9017.0 / 3168.0;
    pub const A62: f64 = -355.0 / 33.0;
    pub const A63: f64 = 46732.0 / 5247.0;
    pub const A64: f64 = 49.0 / 176.0;
    pub const A65: f64 = -5103.0 / 18656.0;
    pub const B1: f64 = 35.0 / 384.0;
    pub const B3: f64 = 500.0 / 1113.0;
    pub const B4: f64 = 125.0 / 192.0;
    pub const B5: f64 = -2187.0 / 6784.0;
    pub const B6: f64 = 11.0 / 84.0;
    // fifth-order minus embedded fourth-order weights
    pub const E1: f64 = 71.0 / 57600.0;
    pub const E3: f64 = -71.0 / 16695.0;
    pub const E4: f64 = 71.0 / 1920.0;
    pub const E5: f64 = -17253.0 / 339200.0;
    pub const E6: f64 = 22.0 / 525.0;
    pub const E7: f64 = -1.0 / 40.0;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Advance {
    Stepped,
    Finished,
    Escaped { t: f64, norm: f64 },
}

/// Step-by-step driver; callers that stop early (classification) use this
/// directly instead of [`integrate`].
pub struct Stepper<F, const N: usize> {
    field: F,
    cfg: IntegratorConfig,
    t: f64,
    state: [f64; N],
    h: f64,
    steps: u64,
    fixed_steps: u64,
    // first-same-as-last derivative for the adaptive pair
    deriv: Option<[f64; N]>,
}

impl<F, const N: usize> Stepper<F, N>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    pub fn new(field: F, s0: [f64; N], cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if s0.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig("initial state must be finite".into()));
        }
        let fixed_steps = (cfg.t_end / cfg.step - 1e-9).ceil().max(1.0) as u64;
        Ok(Self {
            field,
            h: cfg.step.min(cfg.max_step),
            cfg,
            t: 0.0,
            state: s0,
            steps: 0,
            fixed_steps,
            deriv: None,
        })
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn state(&self) -> &[f64; N] {
        &self.state
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn advance(&mut self) -> Result<Advance> {
        match self.cfg.mode {
            Mode::Fixed => Ok(self.advance_fixed()),
            Mode::Adaptive => self.advance_adaptive(),
        }
    }

    fn accept(&mut self, t: f64, next: [f64; N]) -> Advance {
        let r = norm(&next);
        if !r.is_finite() || r > self.cfg.escape_radius {
            return Advance::Escaped { t, norm: r };
        }
        self.t = t;
        self.state = next;
        self.steps += 1;
        Advance::Stepped
    }

    fn advance_fixed(&mut self) -> Advance {
        if self.steps >= self.fixed_steps {
            return Advance::Finished;
        }
        let k = self.steps + 1;
        let (t_next, h) = if k == self.fixed_steps {
            (self.cfg.t_end, self.cfg.t_end - self.t)
        } else {
            (k as f64 * self.cfg.step, self.cfg.step)
        };
        let next = rk4_step(&self.field, &self.state, h);
        self.accept(t_next, next)
    }

    fn advance_adaptive(&mut self) -> Result<Advance> {
        use dopri::*;
        let remaining = self.cfg.t_end - self.t;
        if remaining <= 1e-12 * self.cfg.t_end {
            return Ok(Advance::Finished);
        }
        let f = &self.field;
        let y = self.state;
        let k1 = self.deriv.unwrap_or_else(|| f(&y));
        let min_step = 1e-14 * self.cfg.t_end;
        loop {
            let mut h = self.h.min(self.cfg.max_step);
            let last = h >= remaining;
            if last {
                h = remaining;
            }
            let k2 = f(&axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(&axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(&axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(&axpy(
                &y,
                h,
                &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
            ));
            let k6 = f(&axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ));
            let y_new = axpy(
                &y,
                h,
                &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
            );
            let finite = y_new.iter().all(|v| v.is_finite());
            let k7 = if finite { f(&y_new) } else { [f64::NAN; N] };

            let mut err = 0.0;
            for i in 0..N {
                let e = h
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                        + E7 * k7[i]);
                let sc = self.cfg.abs_tol + self.cfg.rel_tol * y[i].abs().max(y_new[i].abs());
                err += (e / sc).powi(2);
            }
            let err = (err / N as f64).sqrt();

            if err.is_finite() && err <= 1.0 {
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                let t_next = if last { self.cfg.t_end } else { self.t + h };
                let outcome = self.accept(t_next, y_new);
                if outcome == Advance::Stepped {
                    self.deriv = Some(k7);
                    // keep the controller's proposal, not the truncated last step
                    self.h = if last { self.h } else { h * factor };
                }
                return Ok(outcome);
            }

            let factor = if err.is_finite() {
                (0.9 * err.powf(-0.2)).clamp(0.2, 1.0)
            } else {
                0.2
            };
            self.h = h * factor;
            if self.h < min_step {
                return Err(Error::StepUnderflow {
                    t: self.t,
                    step: self.h,
                });
            }
        }
    }
}

/// Online event detection over a stream of stored samples.
pub(crate) struct EventDetector<'a, const N: usize> {
    specs: &'a [EventSpec<N>],
    prev: Option<(f64, [f64; N])>,
    prev2: Option<(f64, [f64; N])>,
    dwell_start: Vec<Option<f64>>,
}

impl<'a, const N: usize> EventDetector<'a, N> {
    pub(crate) fn new(specs: &'a [EventSpec<N>]) -> Self {
        Self {
            specs,
            prev: None,
            prev2: None,
            dwell_start: vec![None; specs.len()],
        }
    }

    /// Feeds one sample; returns `true` when a proximity event fired.
    pub(crate) fn push(&mut self, t: f64, s: &[f64; N], out: &mut Vec<Event<N>>) -> bool {
        let mut converged = false;
        for (idx, spec) in self.specs.iter().enumerate() {
            match spec {
                EventSpec::LocalMax { coord } => {
                    if let (Some((t0, s0)), Some((t1, s1))) = (&self.prev2, &self.prev) {
                        if let Some((tm, sm)) = refine_max(*coord, (*t0, s0), (*t1, s1), (t, s)) {
                            out.push(Event {
                                t: tm,
                                state: sm,
                                spec: idx,
                            });
                        }
                    }
                }
                EventSpec::PlaneCrossing {
                    coord,
                    level,
                    direction,
                } => {
                    if let Some((t0, s0)) = &self.prev {
                        if direction.admits(s0[*coord], s[*coord], *level) {
                            let (tc, sc) = interpolate_crossing(*coord, *level, (*t0, s0), (t, s));
                            out.push(Event {
                                t: tc,
                                state: sc,
                                spec: idx,
                            });
                        }
                    }
                }
                EventSpec::Proximity {
                    point,
                    radius,
                    dwell,
                } => {
                    let mut d2 = 0.0;
                    for i in 0..N {
                        d2 += (s[i] - point[i]).powi(2);
                    }
                    if d2.sqrt() <= *radius {
                        let start = *self.dwell_start[idx].get_or_insert(t);
                        if t - start >= *dwell {
                            out.push(Event {
                                t,
                                state: *s,
                                spec: idx,
                            });
                            converged = true;
                        }
                    } else {
                        self.dwell_start[idx] = None;
                    }
                }
            }
        }
        self.prev2 = self.prev.take();
        self.prev = Some((t, *s));
        converged
    }
}

/// Quadratic refinement of an interior maximum `v0 < v1 >= v2`.
fn refine_max<const N: usize>(
    coord: usize,
    (t0, s0): (f64, &[f64; N]),
    (t1, s1): (f64, &[f64; N]),
    (t2, s2): (f64, &[f64; N]),
) -> Option<(f64, [f64; N])> {
    let (v0, v1, v2) = (s0[coord], s1[coord], s2[coord]);
    if !(v0 < v1 && v1 >= v2) {
        return None;
    }
    let (u0, u2) = (t0 - t1, t2 - t1);
    let d0 = (v0 - v1) / u0;
    let d2 = (v2 - v1) / u2;
    let a = (d2 - d0) / (u2 - u0);
    if !(a < 0.0) {
        return Some((t1, *s1));
    }
    let b = d0 - a * u0;
    let u = (-b / (2.0 * a)).clamp(u0, u2);
    // Lagrange basis on (u0, 0, u2)
    let l0 = u * (u - u2) / (u0 * (u0 - u2));
    let l1 = (u - u0) * (u - u2) / (u0 * u2);
    let l2 = (u - u0) * u / (u2 * (u2 - u0));
    let mut s = [0.0; N];
    for i in 0..N {
        s[i] = l0 * s0[i] + l1 * s1[i] + l2 * s2[i];
    }
    s[coord] = v1 - b * b / (4.0 * a);
    Some((t1 + u, s))
}

fn interpolate_crossing<const N: usize>(
    coord: usize,
    level: f64,
    (t0, s0): (f64, &[f64; N]),
    (t1, s1): (f64, &[f64; N]),
) -> (f64, [f64; N]) {
    let denom = s1[coord] - s0[coord];
    let w = if denom == 0.0 {
        1.0
    } else {
        ((level - s0[coord]) / denom).clamp(0.0, 1.0)
    };
    let mut s = [0.0; N];
    for i in 0..N {
        s[i] = s0[i] + w * (s1[i] - s0[i]);
    }
    s[coord] = level;
    (t0 + w * (t1 - t0), s)
}

/// Integrates `field` from `s0` over `[0, cfg.t_end]`.
///
/// Samples (and events) with `t < cfg.transient` are dropped. Escape is a
/// terminal status; step-size underflow is an error.
pub fn integrate<const N: usize, F>(
    field: F,
    s0: [f64; N],
    cfg: &IntegratorConfig,
    events: &[EventSpec<N>],
) -> Result<Trajectory<N>>
where
    F: Fn(&[f64; N]) -> [f64; N],
{
    for spec in events {
        if let EventSpec::Proximity { radius, dwell, .. } = spec {
            if !(*radius > 0.0 && *dwell >= 0.0) {
                return Err(Error::InvalidConfig(
                    "proximity events need radius > 0 and dwell >= 0".into(),
                ));
            }
        }
    }
    let mut stepper = Stepper::new(field, s0, cfg.clone())?;
    let mut detector = EventDetector::new(events);
    let mut traj = Trajectory::from_samples(Vec::new(), Vec::new());

    let mut record = |t: f64, s: &[f64; N], traj: &mut Trajectory<N>| -> bool {
        if t < cfg.transient {
            return false;
        }
        traj.times.push(t);
        traj.states.push(*s);
        detector.push(t, s, &mut traj.events)
    };

    if record(0.0, &s0, &mut traj) {
        traj.terminal = Terminal::Converged { t: 0.0 };
        return Ok(traj);
    }
    loop {
        match stepper.advance()? {
            Advance::Stepped => {
                let t = stepper.t();
                if record(t, stepper.state(), &mut traj) {
                    traj.terminal = Terminal::Converged { t };
                    break;
                }
            }
            Advance::Finished => break,
            Advance::Escaped { t, norm } => {
                traj.terminal = Terminal::Escaped { t, norm };
                break;
            }
        }
    }
    Ok(traj)
}

/// Interior samples with `v[i-1] < v[i] >= v[i+1]`, refined by a parabola
/// through the three samples. Returns `(time, value)` pairs.
pub fn local_maxima<const N: usize>(traj: &Trajectory<N>, coord: usize) -> Vec<(f64, f64)> {
    let specs = [EventSpec::LocalMax { coord }];
    replay(traj, &specs)
        .into_iter()
        .map(|e| (e.t, e.state[coord]))
        .collect()
}

/// Linearly interpolated states where `coord` passes `level` in `direction`.
pub fn plane_crossings<const N: usize>(
    traj: &Trajectory<N>,
    coord: usize,
    level: f64,
    direction: Direction,
) -> Vec<(f64, [f64; N])> {
    let specs = [EventSpec::PlaneCrossing {
        coord,
        level,
        direction,
    }];
    replay(traj, &specs)
        .into_iter()
        .map(|e| (e.t, e.state))
        .collect()
}

fn replay<const N: usize>(traj: &Trajectory<N>, specs: &[EventSpec<N>]) -> Vec<Event<N>> {
    let mut detector = EventDetector::new(specs);
    let mut out = Vec::new();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        detector.push(*t, s, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay(s: &[f64; 1]) -> [f64; 1] {
        [-s[0]]
    }

    #[test]
    fn adaptive_exponential_decay() {
        let cfg = IntegratorConfig::adaptive(1e-10, 1e-12, 0.1, 1.0);
        let traj = integrate(decay, [1.0], &cfg, &[]).unwrap();
        let last = traj.last_state().unwrap()[0];
        assert!((last - (-1.0f64).exp()).abs() < 1e-8);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
        assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn adaptive_respects_max_step() {
        let cfg = IntegratorConfig::adaptive(1e-3, 1e-6, 0.05, 3.0);
        let traj = integrate(decay, [1.0], &cfg, &[]).unwrap();
        assert!(traj.times.windows(2).all(|w| w[1] - w[0] <= 0.05 + 1e-15));
    }

    #[test]
    fn fixed_rk4_exact_steps() {
        let cfg = IntegratorConfig::fixed(0.25, 1.0);
        let traj = integrate(decay, [1.0], &cfg, &[]).unwrap();
        assert_eq!(traj.times, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn fixed_rk4_non_multiple_end() {
        let cfg = IntegratorConfig::fixed(0.3, 1.0);
        let traj = integrate(decay, [1.0], &cfg, &[]).unwrap();
        assert_eq!(traj.len(), 5);
        assert_eq!(*traj.times.last().unwrap(), 1.0);
    }

    #[test]
    fn escape_is_terminal_not_error() {
        let grow = |s: &[f64; 1]| [s[0]];
        let cfg = IntegratorConfig::fixed(0.01, 100.0).with_escape_radius(1e3);
        let traj = integrate(grow, [1.0], &cfg, &[]).unwrap();
        assert!(traj.escaped());
        assert!(traj.states.iter().all(|s| s[0] <= 1e3));
    }

    #[test]
    fn finite_time_blowup_escapes_or_underflows() {
        let blow = |s: &[f64; 1]| [s[0] * s[0]];
        let cfg = IntegratorConfig::adaptive(1e-8, 1e-10, 0.1, 2.0);
        match integrate(blow, [1.0], &cfg, &[]) {
            Ok(traj) => assert!(traj.escaped()),
            Err(Error::StepUnderflow { .. }) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn transient_samples_dropped() {
        let cfg = IntegratorConfig::fixed(0.1, 2.0).with_transient(1.0);
        let traj = integrate(decay, [1.0], &cfg, &[]).unwrap();
        assert!(traj.times.iter().all(|&t| t >= 1.0));
    }

    #[test]
    fn sinusoid_maxima() {
        let times: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.01).collect();
        let states: Vec<[f64; 1]> = times.iter().map(|t| [t.sin()]).collect();
        let traj = Trajectory::from_samples(times, states);
        let maxima = local_maxima(&traj, 0);
        assert_eq!(maxima.len(), 2);
        let pi = std::f64::consts::PI;
        for ((t, v), want) in maxima.iter().zip([pi / 2.0, pi / 2.0 + 2.0 * pi]) {
            assert!((v - 1.0).abs() < 1e-4);
            assert!((t - want).abs() < 1e-3);
        }
    }

    #[test]
    fn monotone_has_no_maxima() {
        let times: Vec<f64> = (0..50).map(|i| i as f64).collect();
        let states: Vec<[f64; 1]> = times.iter().map(|t| [*t]).collect();
        assert!(local_maxima(&Trajectory::from_samples(times, states), 0).is_empty());
    }

    #[test]
    fn straight_line_crossing() {
        let times: Vec<f64> = (0..=20).map(|i| i as f64 * 0.15).collect();
        let states: Vec<[f64; 1]> = times.iter().map(|t| [t - 1.0]).collect();
        let traj = Trajectory::from_samples(times, states);
        let c = plane_crossings(&traj, 0, 0.0, Direction::Both);
        assert_eq!(c.len(), 1);
        assert!((c[0].0 - 1.0).abs() < 1e-12);
        assert!(plane_crossings(&traj, 0, 0.0, Direction::Down).is_empty());

        let states: Vec<[f64; 1]> = traj.times.iter().map(|t| [1.0 - t]).collect();
        let falling = Trajectory::from_samples(traj.times.clone(), states);
        assert!(plane_crossings(&falling, 0, 0.0, Direction::Up).is_empty());
    }

    #[test]
    fn proximity_event_converges() {
        let cfg = IntegratorConfig::fixed(0.01, 50.0);
        let events = [EventSpec::Proximity {
            point: [0.0],
            radius: 0.01,
            dwell: 1.0,
        }];
        let traj = integrate(decay, [1.0], &cfg, &events).unwrap();
        match traj.terminal {
            // |s| <= 0.01 from t = ln 100, then one unit of dwell
            Terminal::Converged { t } => assert!((t - (100f64.ln() + 1.0)).abs() < 0.02),
            other => panic!("{other:?}"),
        }
        assert_eq!(traj.events.len(), 1);
    }

    #[test]
    fn invalid_configs() {
        let cfg = IntegratorConfig {
            step: 0.1,
            ..IntegratorConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = IntegratorConfig::fixed(0.1, 1.0).with_transient(1.0);
        assert!(cfg.validate().is_err());
        assert!(integrate(decay, [f64::NAN], &IntegratorConfig::fixed(0.1, 1.0), &[]).is_err());
    }
}
