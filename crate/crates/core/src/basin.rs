//! Basins of attraction on the section plane `z = r-` and basin-size scaling.
//!
//! An initial condition is labeled by integrating it until one of:
//! the state dwells near a fixed point (`E5`/`E6`), a run of consecutive
//! section crossings all fall on one side of `x = 0`, the trajectory
//! escapes, or the time budget runs out.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, UnitSphere};
use rayon::prelude::*;

use crate::dynamics::{vector_field, Params, State3};
use crate::equilibria::{equilibria, EqId};
use crate::error::{Error, Result};
use crate::integrate::{integrate, Advance, IntegratorConfig, Mode, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AttractorLabel {
    /// Chaotic attractor confined to `x < 0`.
    Chaotic1,
    /// Chaotic attractor confined to `x > 0`.
    Chaotic2,
    /// Converged to `E5` (`x < 0`).
    FixedPoint1,
    /// Converged to `E6` (`x > 0`).
    FixedPoint2,
    Escaped,
    Undecided,
}

impl AttractorLabel {
    pub const ALL: [AttractorLabel; 6] = [
        Self::Chaotic1,
        Self::Chaotic2,
        Self::FixedPoint1,
        Self::FixedPoint2,
        Self::Escaped,
        Self::Undecided,
    ];

    pub fn is_attractor(self) -> bool {
        !matches!(self, Self::Escaped | Self::Undecided)
    }

    pub fn is_chaotic(self) -> bool {
        matches!(self, Self::Chaotic1 | Self::Chaotic2)
    }

    /// Label of the rotated initial condition `(-x, -y, z)`.
    pub fn mirrored(self) -> Self {
        match self {
            Self::Chaotic1 => Self::Chaotic2,
            Self::Chaotic2 => Self::Chaotic1,
            Self::FixedPoint1 => Self::FixedPoint2,
            Self::FixedPoint2 => Self::FixedPoint1,
            other => other,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Chaotic1 => "chaotic-1",
            Self::Chaotic2 => "chaotic-2",
            Self::FixedPoint1 => "fixed-point-1",
            Self::FixedPoint2 => "fixed-point-2",
            Self::Escaped => "escaped",
            Self::Undecided => "undecided",
        }
    }

    /// Colour used by the image writer: green / red for the chaotic basins,
    /// magenta / blue for the fixed-point basins, white otherwise.
    pub fn color(self) -> [u8; 3] {
        match self {
            Self::Chaotic1 => [0, 170, 0],
            Self::Chaotic2 => [220, 0, 0],
            Self::FixedPoint1 => [255, 0, 255],
            Self::FixedPoint2 => [0, 0, 255],
            Self::Escaped | Self::Undecided => [255, 255, 255],
        }
    }
}

impl fmt::Display for AttractorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub fp_radius: f64,
    pub fp_dwell: f64,
    /// Consecutive same-sign section crossings required for a chaotic label.
    pub n_crossings: usize,
    pub t_max: f64,
    /// Crossings before this time are ignored.
    pub transient: f64,
    pub escape_radius: f64,
    /// Section plane; `None` uses `r-` of the parameters.
    pub section_level: Option<f64>,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            fp_radius: 0.05,
            fp_dwell: 20.0,
            n_crossings: 10,
            t_max: 2000.0,
            transient: 100.0,
            escape_radius: 1e6,
            section_level: None,
            rel_tol: 1e-7,
            abs_tol: 1e-9,
            max_step: 0.05,
        }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.fp_radius,
            self.fp_dwell,
            self.t_max,
            self.escape_radius,
            self.rel_tol,
            self.max_step,
        ]
        .iter()
        .all(|v| *v > 0.0);
        if !positive || self.n_crossings == 0 || !(self.transient >= 0.0) {
            return Err(Error::InvalidConfig(
                "classifier settings must be positive".into(),
            ));
        }
        if self.transient >= self.t_max {
            return Err(Error::InvalidConfig("transient must be below t_max".into()));
        }
        Ok(())
    }

    fn integrator(&self, escape_radius: f64) -> IntegratorConfig {
        IntegratorConfig {
            mode: Mode::Adaptive,
            step: self.max_step.min(1e-3),
            max_step: self.max_step,
            rel_tol: self.rel_tol,
            abs_tol: self.abs_tol,
            t_end: self.t_max,
            transient: 0.0,
            escape_radius,
        }
    }
}

/// Classification context resolved once per parameter set.
#[derive(Debug, Clone)]
pub struct Classifier {
    params: Params,
    cfg: ClassifierConfig,
    level: f64,
    fixed_points: Vec<(AttractorLabel, State3)>,
}

impl Classifier {
    pub fn new(p: &Params, cfg: &ClassifierConfig) -> Result<Self> {
        cfg.validate()?;
        let set = equilibria(p)?;
        let level = match cfg.section_level.or(set.r_minus) {
            Some(level) => level,
            None => {
                return Err(Error::InvalidConfig(
                    "no real r- root; section level must be given".into(),
                ))
            }
        };
        let fixed_points = [
            (AttractorLabel::FixedPoint1, EqId::E5),
            (AttractorLabel::FixedPoint2, EqId::E6),
        ]
        .into_iter()
        .filter_map(|(label, id)| set.get(id).map(|e| (label, e)))
        .collect();
        Ok(Self {
            params: *p,
            cfg: cfg.clone(),
            level,
            fixed_points,
        })
    }

    pub fn section_level(&self) -> f64 {
        self.level
    }

    pub fn classify(&self, s0: State3) -> AttractorLabel {
        self.classify_with_escape(s0, self.cfg.escape_radius)
    }

    pub fn classify_with_escape(&self, s0: State3, escape_radius: f64) -> AttractorLabel {
        let p = self.params;
        let cfg = &self.cfg;
        let Ok(mut stepper) = Stepper::new(
            |s: &State3| vector_field(&p, s),
            s0,
            cfg.integrator(escape_radius),
        ) else {
            return AttractorLabel::Escaped;
        };

        let mut dwell_start: Vec<Option<f64>> = vec![None; self.fixed_points.len()];
        let mut run_sign = 0i8;
        let mut run_len = 0usize;
        let mut prev = (0.0, s0);

        // checks the current sample; returns a label once decided
        let mut visit = |t: f64, s: &State3, prev: &(f64, State3)| -> Option<AttractorLabel> {
            for (k, (label, e)) in self.fixed_points.iter().enumerate() {
                let d = ((s[0] - e[0]).powi(2) + (s[1] - e[1]).powi(2) + (s[2] - e[2]).powi(2))
                    .sqrt();
                if d <= cfg.fp_radius {
                    let start = *dwell_start[k].get_or_insert(t);
                    if t - start >= cfg.fp_dwell {
                        return Some(*label);
                    }
                } else {
                    dwell_start[k] = None;
                }
            }
            let (z0, z1) = (prev.1[2], s[2]);
            let crossed = (z0 < self.level && z1 >= self.level) || (z0 > self.level && z1 <= self.level);
            if crossed && t >= cfg.transient {
                let w = (self.level - z0) / (z1 - z0);
                let x = prev.1[0] + w * (s[0] - prev.1[0]);
                let sign = if x < 0.0 {
                    -1
                } else if x > 0.0 {
                    1
                } else {
                    0
                };
                if sign != 0 && sign == run_sign {
                    run_len += 1;
                } else {
                    run_sign = sign;
                    run_len = usize::from(sign != 0);
                }
                if run_len >= cfg.n_crossings {
                    return Some(if run_sign < 0 {
                        AttractorLabel::Chaotic1
                    } else {
                        AttractorLabel::Chaotic2
                    });
                }
            }
            None
        };

        if let Some(label) = visit(0.0, &s0, &prev) {
            return label;
        }
        loop {
            match stepper.advance() {
                Ok(Advance::Stepped) => {
                    let t = stepper.t();
                    let s = *stepper.state();
                    if let Some(label) = visit(t, &s, &prev) {
                        return label;
                    }
                    prev = (t, s);
                }
                Ok(Advance::Finished) => return AttractorLabel::Undecided,
                Ok(Advance::Escaped { .. }) | Err(_) => return AttractorLabel::Escaped,
            }
        }
    }
}

pub fn classify_ic(p: &Params, s0: State3, cfg: &ClassifierConfig) -> Result<AttractorLabel> {
    Ok(Classifier::new(p, cfg)?.classify(s0))
}

/// Axis-aligned window of initial conditions on a plane `z = level`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub nx: usize,
    pub ny: usize,
    /// `None` uses the classifier's section level (`r-`).
    pub level: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            x_range: (-10.0, 10.0),
            y_range: (-10.0, 10.0),
            nx: 200,
            ny: 200,
            level: None,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nx == 0 || self.ny == 0 || !(self.x_range.1 > self.x_range.0) || !(self.y_range.1 > self.y_range.0) {
            return Err(Error::InvalidConfig("grid window must be nondegenerate".into()));
        }
        Ok(())
    }

    pub fn cell_center(&self, i: usize, j: usize) -> (f64, f64) {
        let dx = (self.x_range.1 - self.x_range.0) / self.nx as f64;
        let dy = (self.y_range.1 - self.y_range.0) / self.ny as f64;
        (
            self.x_range.0 + (i as f64 + 0.5) * dx,
            self.y_range.0 + (j as f64 + 0.5) * dy,
        )
    }

    pub fn cell_size(&self) -> (f64, f64) {
        (
            (self.x_range.1 - self.x_range.0) / self.nx as f64,
            (self.y_range.1 - self.y_range.0) / self.ny as f64,
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BasinGrid {
    pub spec: GridSpec,
    pub level: f64,
    /// Row-major: `labels[j * nx + i]` is the cell at column `i`, row `j`.
    pub labels: Vec<AttractorLabel>,
    pub t_max: f64,
}

impl BasinGrid {
    pub fn label(&self, i: usize, j: usize) -> AttractorLabel {
        self.labels[j * self.spec.nx + i]
    }

    pub fn count(&self, label: AttractorLabel) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    pub fn fraction(&self, pred: impl Fn(AttractorLabel) -> bool) -> f64 {
        self.labels.iter().filter(|l| pred(**l)).count() as f64 / self.labels.len() as f64
    }

    /// Cells whose label differs from the mirrored label of the point-reflected
    /// cell. Meaningful for windows symmetric about the origin.
    pub fn mirror_violations(&self) -> usize {
        let (nx, ny) = (self.spec.nx, self.spec.ny);
        (0..ny)
            .flat_map(|j| (0..nx).map(move |i| (i, j)))
            .filter(|&(i, j)| self.label(i, j) != self.label(nx - 1 - i, ny - 1 - j).mirrored())
            .count()
    }
}

pub fn basin_grid(p: &Params, spec: &GridSpec, cfg: &ClassifierConfig) -> Result<BasinGrid> {
    spec.validate()?;
    let classifier = Classifier::new(p, cfg)?;
    let level = spec.level.unwrap_or(classifier.section_level());
    let labels = (0..spec.nx * spec.ny)
        .into_par_iter()
        .map(|idx| {
            let (x, y) = spec.cell_center(idx % spec.nx, idx / spec.nx);
            classifier.classify([x, y, level])
        })
        .collect();
    Ok(BasinGrid {
        spec: spec.clone(),
        level,
        labels,
        t_max: cfg.t_max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasinClass {
    /// `P0 = 1`, `gamma = 0`: attracts almost every initial condition.
    Class1,
    /// `P0 < 1`, `gamma = 0`: attracts a fixed fraction of phase space.
    Class2,
    /// `0 < gamma < D`.
    Class3,
    /// `gamma = D`: bounded basin.
    Class4,
}

impl BasinClass {
    pub fn number(self) -> u8 {
        match self {
            Self::Class1 => 1,
            Self::Class2 => 2,
            Self::Class3 => 3,
            Self::Class4 => 4,
        }
    }
}

/// Tolerance used when comparing `gamma` with `0` or `D` and `P0` with `1`.
pub const CLASS_TOL: f64 = 0.01;

/// Four-class rule on a fitted `P(r) = P0 / r^gamma`; `None` when the fit lies
/// outside every class (`gamma < 0` or `gamma > D`).
pub fn basin_class(gamma: f64, p0: f64, dim: f64) -> Option<BasinClass> {
    if gamma.abs() <= CLASS_TOL {
        if (p0 - 1.0).abs() <= CLASS_TOL {
            Some(BasinClass::Class1)
        } else {
            Some(BasinClass::Class2)
        }
    } else if (gamma - dim).abs() <= CLASS_TOL {
        Some(BasinClass::Class4)
    } else if gamma > 0.0 && gamma < dim {
        Some(BasinClass::Class3)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub radii: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub gamma: f64,
    pub p0: f64,
    /// Root-mean-square residual of the log-log fit.
    pub residual: f64,
    pub class: Option<BasinClass>,
}

/// Least-squares fit of `log P = log P0 - gamma log r` over radii with `P > 0`.
pub fn fit_power_law(radii: &[f64], probabilities: &[f64], dim: f64) -> Result<ScalingFit> {
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .zip(probabilities)
        .filter(|(_, p)| **p > 0.0)
        .map(|(r, p)| (r.ln(), p.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::DegenerateFit { usable: pts.len() });
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit { usable: 1 });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    let gamma = -slope;
    let p0 = intercept.exp();
    Ok(ScalingFit {
        radii: radii.to_vec(),
        probabilities: probabilities.to_vec(),
        gamma,
        p0,
        residual,
        class: basin_class(gamma, p0, dim),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingConfig {
    pub radii: Vec<f64>,
    pub samples_per_radius: usize,
    pub seed: u64,
    /// Count fixed-point attractors as "in basin" alongside the chaotic ones.
    pub include_fixed_points: bool,
    pub classifier: ClassifierConfig,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            radii: log_radii(1e1, 1e6, 6),
            samples_per_radius: 1000,
            seed: 1,
            include_fixed_points: true,
            // far-field returns cost steps in proportion to r; labels at
            // 1e-5 match those at 1e-7 on spot checks up to r = 1e6
            classifier: ClassifierConfig {
                rel_tol: 1e-5,
                ..ClassifierConfig::default()
            },
        }
    }
}

/// `n` log-spaced radii from `lo` to `hi` inclusive.
pub fn log_radii(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect()
}

/// Time average of a reference trajectory started at `(1, -1, 0)`, which
/// settles on the `x > 0` attractor in the multistable regime.
pub fn attractor_centroid(p: &Params) -> Result<State3> {
    let cfg = IntegratorConfig {
        t_end: 550.0,
        transient: 50.0,
        max_step: 0.01,
        step: 1e-3,
        ..IntegratorConfig::default()
    };
    let traj = integrate(|s| vector_field(p, s), [1.0, -1.0, 0.0], &cfg, &[])?;
    if traj.escaped() || traj.len() < 2 {
        return Err(Error::InvalidConfig(
            "reference trajectory for the centroid escaped".into(),
        ));
    }
    let mut acc = [0.0; 3];
    for (w, s) in traj.times.windows(2).zip(traj.states.windows(2)) {
        for i in 0..3 {
            acc[i] += 0.5 * (w[1] - w[0]) * (s[0][i] + s[1][i]);
        }
    }
    let span = traj.times[traj.len() - 1] - traj.times[0];
    Ok(acc.map(|v| v / span))
}

fn sample_seed(seed: u64, radius_idx: usize, sample_idx: usize) -> u64 {
    // splitmix64 over the triple
    let mut z = seed
        ^ (radius_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (sample_idx as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// In-basin probability at each radius, estimated from random directions
/// around the attractor centroid, followed by the power-law fit.
pub fn basin_scaling(p: &Params, cfg: &ScalingConfig) -> Result<ScalingFit> {
    if cfg.radii.iter().any(|r| !(*r > 0.0)) || cfg.radii.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    if cfg.samples_per_radius < 100 {
        return Err(Error::InvalidConfig(
            "samples_per_radius must be at least 100".into(),
        ));
    }
    let classifier = Classifier::new(p, &cfg.classifier)?;
    let centroid = attractor_centroid(p)?;
    let probabilities = cfg
        .radii
        .iter()
        .enumerate()
        .map(|(ri, &r)| {
            let escape = cfg.classifier.escape_radius.max(1e3 * r);
            let hits = (0..cfg.samples_per_radius)
                .into_par_iter()
                .filter(|&k| {
                    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(cfg.seed, ri, k));
                    let dir: [f64; 3] = UnitSphere.sample(&mut rng);
                    let s0 = [
                        centroid[0] + r * dir[0],
                        centroid[1] + r * dir[1],
                        centroid[2] + r * dir[2],
                    ];
                    let label = classifier.classify_with_escape(s0, escape);
                    label.is_chaotic() || (cfg.include_fixed_points && label.is_attractor())
                })
                .count();
            hits as f64 / cfg.samples_per_radius as f64
        })
        .collect::<Vec<_>>();
    fit_power_law(&cfg.radii, &probabilities, 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_rules() {
        assert_eq!(basin_class(0.0, 1.0, 3.0), Some(BasinClass::Class1));
        assert_eq!(basin_class(0.0, 0.4, 3.0), Some(BasinClass::Class2));
        assert_eq!(basin_class(0.051, 0.38, 3.0), Some(BasinClass::Class3));
        assert_eq!(basin_class(2.5, 0.38, 3.0), Some(BasinClass::Class3));
        assert_eq!(basin_class(3.0, 5.0, 3.0), Some(BasinClass::Class4));
        assert_eq!(basin_class(-0.5, 0.4, 3.0), None);
        assert_eq!(basin_class(3.5, 0.4, 3.0), None);
    }

    #[test]
    fn exact_power_law_fit() {
        let radii = log_radii(10.0, 1e6, 11);
        let probs: Vec<f64> = radii.iter().map(|r| 0.38 * r.powf(-0.051)).collect();
        let fit = fit_power_law(&radii, &probs, 3.0).unwrap();
        assert!((fit.gamma - 0.051).abs() < 1e-12);
        assert!((fit.p0 - 0.38).abs() < 1e-12);
        assert!(fit.residual < 1e-12);
        assert_eq!(fit.class, Some(BasinClass::Class3));
    }

    #[test]
    fn all_in_basin_is_class1() {
        let radii = log_radii(10.0, 1e6, 6);
        let fit = fit_power_law(&radii, &[1.0; 6], 3.0).unwrap();
        assert_eq!(fit.gamma, 0.0);
        assert!((fit.p0 - 1.0).abs() < 1e-15);
        assert_eq!(fit.class, Some(BasinClass::Class1));
    }

    #[test]
    fn too_few_radii_is_degenerate() {
        let err = fit_power_law(&[1.0, 2.0, 3.0], &[0.5, 0.0, 0.2], 3.0).unwrap_err();
        assert_eq!(err, Error::DegenerateFit { usable: 2 });
    }

    #[test]
    fn mirrored_labels_are_involutive() {
        for l in AttractorLabel::ALL {
            assert_eq!(l.mirrored().mirrored(), l);
        }
    }

    #[test]
    fn grid_cell_centers() {
        let g = GridSpec {
            x_range: (-1.0, 1.0),
            y_range: (0.0, 4.0),
            nx: 2,
            ny: 4,
            level: None,
        };
        assert_eq!(g.cell_center(0, 0), (-0.5, 0.5));
        assert_eq!(g.cell_center(1, 3), (0.5, 3.5));
    }

    #[test]
    fn equilibrium_start_is_fixed_point() {
        let p = Params::multistable();
        let e6 = equilibria(&p).unwrap().get(EqId::E6).unwrap();
        let cfg = ClassifierConfig::default();
        assert_eq!(classify_ic(&p, e6, &cfg).unwrap(), AttractorLabel::FixedPoint2);
        let e5 = equilibria(&p).unwrap().get(EqId::E5).unwrap();
        assert_eq!(classify_ic(&p, e5, &cfg).unwrap(), AttractorLabel::FixedPoint1);
    }

    #[test]
    fn scaling_rejects_bad_input() {
        let p = Params::multistable();
        let cfg = ScalingConfig {
            radii: vec![10.0, 5.0],
            ..Default::default()
        };
        assert!(basin_scaling(&p, &cfg).is_err());
        let cfg = ScalingConfig {
            samples_per_radius: 10,
            ..Default::default()
        };
        assert!(basin_scaling(&p, &cfg).is_err());
    }
}
