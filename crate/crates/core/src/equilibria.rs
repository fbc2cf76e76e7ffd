//! Closed-form equilibria and their linear stability.
//!
//! Solving `f = 0` gives `y = (a5 / a4) x z`, then either `x = 0` (with
//! `z = 0` or `z = a6 / a8`) or `z = r±`, the roots of
//! `a3 a5 z^2 + a1 a4 z - a1 a4 = 0`, with `x = ±p±`, `y = ±q±`.
//!
//! Labels: `E1` origin, `E2 = (0, 0, a6/a8)`, `E3/E4 = ±(p+, q+)` on `z = r+`
//! and `E5/E6 = ∓/±(p-, q-)` on `z = r-`. `E5` has `x < 0`, `E6` has `x > 0`;
//! this is the pair that gains stability as `a8` grows past about 0.86, and it
//! sits in the section plane `z = r-` used for basin classification.

use std::fmt;

use nalgebra::Matrix3 as NaMatrix3;
use num_complex::Complex64;

use crate::dynamics::{jacobian, vector_field, Matrix3, Params, State3};
use crate::error::{Error, Result};

/// Real-part threshold separating "marginally stable" from (un)stable.
pub const EPS_STAB: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EqId {
    E1,
    E2,
    E3,
    E4,
    E5,
    E6,
}

impl EqId {
    pub const ALL: [EqId; 6] = [EqId::E1, EqId::E2, EqId::E3, EqId::E4, EqId::E5, EqId::E6];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for EqId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "E{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumSet {
    pub r_plus: Option<f64>,
    pub r_minus: Option<f64>,
    pub p_plus: Option<f64>,
    pub p_minus: Option<f64>,
    pub q_plus: Option<f64>,
    pub q_minus: Option<f64>,
    /// Indexed by [`EqId::index`]; `None` when the equilibrium does not exist.
    pub points: [Option<State3>; 6],
}

impl EquilibriumSet {
    pub fn get(&self, id: EqId) -> Option<State3> {
        self.points[id.index()]
    }

    pub fn present(&self) -> impl Iterator<Item = (EqId, State3)> + '_ {
        EqId::ALL
            .into_iter()
            .filter_map(|id| self.get(id).map(|s| (id, s)))
    }
}

pub fn residual(p: &Params, s: &State3) -> f64 {
    crate::integrate::norm(&vector_field(p, s))
}

fn residual_bound(s: &State3) -> f64 {
    1e-9 * (1.0 + crate::integrate::norm(s))
}

pub fn equilibria(p: &Params) -> Result<EquilibriumSet> {
    p.validate()?;
    for (name, v) in [("a3", p.a3), ("a4", p.a4), ("a5", p.a5), ("a7", p.a7)] {
        if v == 0.0 {
            return Err(Error::DegenerateParams(name));
        }
    }
    let origin = Some([0.0, 0.0, 0.0]);
    let e2 = (p.a8 != 0.0).then(|| [0.0, 0.0, p.a6 / p.a8]);

    // roots of a3 a5 r^2 + a2 a4 r - a1 a4 = 0; the linear term carries a2,
    // which only coincides with the a1-only form when a1 = a2
    let disc = (p.a2 * p.a4).powi(2) + 4.0 * p.a3 * p.a5 * p.a1 * p.a4;
    let (r_plus, r_minus) = if disc >= 0.0 {
        let sq = disc.sqrt();
        let den = 2.0 * p.a3 * p.a5;
        (
            Some((-p.a2 * p.a4 + sq) / den),
            Some((-p.a2 * p.a4 - sq) / den),
        )
    } else {
        (None, None)
    };
    let branch = |r: Option<f64>| -> (Option<f64>, Option<f64>) {
        let Some(r) = r else { return (None, None) };
        let rad = (p.a6 * p.a4 - p.a8 * p.a4 * r) / (p.a7 * p.a5);
        if rad < 0.0 {
            return (None, None);
        }
        let pp = rad.sqrt();
        (Some(pp), Some(p.a5 / p.a4 * pp * r))
    };
    let (p_plus, q_plus) = branch(r_plus);
    let (p_minus, q_minus) = branch(r_minus);

    let pair = |pp: Option<f64>, qq: Option<f64>, r: Option<f64>| match (pp, qq, r) {
        (Some(pp), Some(qq), Some(r)) => (Some([pp, qq, r]), Some([-pp, -qq, r])),
        _ => (None, None),
    };
    let (e3, e4) = pair(p_plus, q_plus, r_plus);
    let (e6, e5) = pair(p_minus, q_minus, r_minus);

    Ok(EquilibriumSet {
        r_plus,
        r_minus,
        p_plus,
        p_minus,
        q_plus,
        q_minus,
        points: [origin, e2, e3, e4, e5, e6],
    })
}

/// Coefficients `(c2, c1, c0)` of `det(lambda I - m) = l^3 + c2 l^2 + c1 l + c0`.
pub fn characteristic_polynomial(m: &Matrix3) -> [f64; 3] {
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2]
        - m[0][2] * m[2][0]
        + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    [-tr, minors, -det]
}

fn eval_cubic(c: &[f64; 3], z: Complex64) -> Complex64 {
    ((z + c[0]) * z + c[1]) * z + c[2]
}

/// Roots of the monic cubic `l^3 + c2 l^2 + c1 l + c0`, or `None` if the
/// closed form loses too much precision.
fn cardano_roots(c: &[f64; 3]) -> Option<[Complex64; 3]> {
    let [a, b, cc] = *c;
    let p = b - a * a / 3.0;
    let q = 2.0 * a.powi(3) / 27.0 - a * b / 3.0 + cc;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    // pick the real root of largest magnitude for a stable deflation
    let t = if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-q / 2.0 + sq).cbrt();
        let v = (-q / 2.0 - sq).cbrt();
        u + v
    } else if p == 0.0 {
        0.0
    } else {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3)
            .map(|k| m * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos())
            .max_by(|x, y| x.abs().total_cmp(&y.abs()))
            .unwrap()
    };
    let mut r = t - a / 3.0;
    for _ in 0..3 {
        let f = ((r + a) * r + b) * r + cc;
        let df = (3.0 * r + 2.0 * a) * r + b;
        if df == 0.0 {
            break;
        }
        let step = f / df;
        if !step.is_finite() {
            break;
        }
        r -= step;
    }
    // l^3 + a l^2 + b l + c = (l - r)(l^2 + e l + f)
    let e = a + r;
    let f = b + e * r;
    let qd = e * e / 4.0 - f;
    let (z1, z2) = if qd >= 0.0 {
        let s = -e / 2.0 - qd.sqrt().copysign(e);
        let z1 = Complex64::new(s, 0.0);
        let z2 = if s != 0.0 {
            Complex64::new(f / s, 0.0)
        } else {
            Complex64::new(-e - s, 0.0)
        };
        (z1, z2)
    } else {
        let im = (-qd).sqrt();
        (Complex64::new(-e / 2.0, im), Complex64::new(-e / 2.0, -im))
    };
    let roots = [Complex64::new(r, 0.0), z1, z2];
    let scale = 1.0 + a.abs() + b.abs() + cc.abs();
    let ok = roots.iter().all(|z| {
        let bound = 1e-10 * scale * (1.0 + z.norm().powi(3));
        z.re.is_finite() && z.im.is_finite() && eval_cubic(c, *z).norm() <= bound
    });
    ok.then_some(roots)
}

fn companion_roots(c: &[f64; 3]) -> [Complex64; 3] {
    let m = NaMatrix3::new(0.0, 0.0, -c[2], 1.0, 0.0, -c[1], 0.0, 1.0, -c[0]);
    let ev = m.complex_eigenvalues();
    [ev[0], ev[1], ev[2]]
}

fn sort_desc(mut roots: [Complex64; 3]) -> [Complex64; 3] {
    roots.sort_by(|x, y| y.re.total_cmp(&x.re).then(y.im.total_cmp(&x.im)));
    roots
}

/// Eigenvalues of a 3×3 matrix as roots of its characteristic cubic, sorted
/// by descending real part.
pub fn eigenvalues(m: &Matrix3) -> [Complex64; 3] {
    let c = characteristic_polynomial(m);
    sort_desc(cardano_roots(&c).unwrap_or_else(|| companion_roots(&c)))
}

pub fn eigenvalues_at(p: &Params, e: &State3) -> Result<[Complex64; 3]> {
    let res = residual(p, e);
    if !(res < residual_bound(e)) {
        return Err(Error::NotEquilibrium { residual: res });
    }
    Ok(eigenvalues(&jacobian(p, e)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    Stable,
    MarginallyStable,
    /// Eigenvalues on both sides of the imaginary axis; `unstable` counts
    /// those with positive real part.
    Saddle { unstable: usize },
    Unstable,
}

impl StabilityClass {
    pub fn from_eigenvalues(ev: &[Complex64; 3], eps: f64) -> Self {
        let pos = ev.iter().filter(|z| z.re > eps).count();
        let neg = ev.iter().filter(|z| z.re < -eps).count();
        match (pos, neg) {
            (0, 3) => Self::Stable,
            (0, _) => Self::MarginallyStable,
            (_, 0) => Self::Unstable,
            (n, _) => Self::Saddle { unstable: n },
        }
    }

    pub fn is_unstable(self) -> bool {
        matches!(self, Self::Saddle { .. } | Self::Unstable)
    }
}

impl fmt::Display for StabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Stable => write!(f, "stable"),
            Self::MarginallyStable => write!(f, "marginal"),
            Self::Saddle { unstable } => write!(f, "saddle{unstable}"),
            Self::Unstable => write!(f, "unstable"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub a8: f64,
    pub id: EqId,
    /// `None` when the equilibrium does not exist at this `a8`.
    pub point: Option<State3>,
    pub eigenvalues: Option<[Complex64; 3]>,
    pub class: Option<StabilityClass>,
}

impl StabilityReport {
    pub fn max_re(&self) -> Option<f64> {
        self.eigenvalues.map(|ev| ev[0].re)
    }
}

pub fn stability(p: &Params, id: EqId) -> Result<StabilityReport> {
    let set = equilibria(p)?;
    let point = set.get(id);
    let eigenvalues = point.map(|e| eigenvalues_at(p, &e)).transpose()?;
    Ok(StabilityReport {
        a8: p.a8,
        id,
        point,
        eigenvalues,
        class: eigenvalues.map(|ev| StabilityClass::from_eigenvalues(&ev, EPS_STAB)),
    })
}

/// One report per grid value of `a8`; other coefficients are taken from `p`.
pub fn stability_sweep(p: &Params, a8_grid: &[f64], which: EqId) -> Result<Vec<StabilityReport>> {
    if a8_grid.iter().any(|a| !a.is_finite()) || a8_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidConfig(
            "a8 grid must be finite and sorted".into(),
        ));
    }
    a8_grid
        .iter()
        .map(|&a8| stability(&p.with_a8(a8), which))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const A: Params = Params::chaotic();

    #[test]
    fn section_plane_root() {
        let set = equilibria(&A).unwrap();
        assert!((set.r_minus.unwrap() + 1.4637).abs() < 1e-4);
        assert!((set.r_plus.unwrap() - 0.59410).abs() < 1e-5);
        assert!((set.p_plus.unwrap() - 3.50671).abs() < 1e-5);
        assert!((set.q_plus.unwrap() - 1.04167).abs() < 1e-5);
    }

    #[test]
    fn e2_location() {
        assert_eq!(equilibria(&A).unwrap().get(EqId::E2), Some([0.0, 0.0, -24.0]));
        assert_eq!(
            equilibria(&A.with_a8(1.2)).unwrap().get(EqId::E2).unwrap()[2],
            6.0 / 1.2
        );
        assert_eq!(equilibria(&A.with_a8(0.0)).unwrap().get(EqId::E2), None);
    }

    #[test]
    fn all_residuals_vanish() {
        for a8 in [-0.5, -0.25, 0.0, 0.7, 1.2, 1.5] {
            let p = A.with_a8(a8);
            for (_, e) in equilibria(&p).unwrap().present() {
                assert!(residual(&p, &e) < residual_bound(&e));
            }
        }
    }

    #[test]
    fn degenerate_coefficients_named() {
        let mut p = A;
        p.a4 = 0.0;
        assert_eq!(equilibria(&p), Err(Error::DegenerateParams("a4")));
        let mut p = A;
        p.a7 = 0.0;
        assert_eq!(equilibria(&p), Err(Error::DegenerateParams("a7")));
    }

    #[test]
    fn negative_radicand_marks_absent() {
        // large a8 pushes a6 - a8 r+ below zero on the r+ branch
        let set = equilibria(&A.with_a8(20.0)).unwrap();
        assert!(set.get(EqId::E3).is_none() && set.get(EqId::E4).is_none());
        assert!(set.get(EqId::E5).is_some());
    }

    #[test]
    fn origin_eigenvalues() {
        let ev = eigenvalues_at(&A, &[0.0, 0.0, 0.0]).unwrap();
        for (z, want) in ev.iter().zip([2.0, -1.0, -6.0]) {
            assert!((z.re - want).abs() < 1e-12 && z.im.abs() < 1e-12);
        }
    }

    #[test]
    fn non_equilibrium_rejected() {
        assert!(matches!(
            eigenvalues_at(&A, &[1.0, 1.0, 1.0]),
            Err(Error::NotEquilibrium { .. })
        ));
    }

    #[test]
    fn classification_rules() {
        let c = |r: [f64; 3]| {
            StabilityClass::from_eigenvalues(&r.map(|x| Complex64::new(x, 0.0)), EPS_STAB)
        };
        assert_eq!(c([-1.0, -2.0, -3.0]), StabilityClass::Stable);
        assert_eq!(c([0.0, -2.0, -3.0]), StabilityClass::MarginallyStable);
        assert_eq!(c([1.0, 1.0, -3.0]), StabilityClass::Saddle { unstable: 2 });
        assert_eq!(c([1.0, 1.0, 1.0]), StabilityClass::Unstable);
    }

    #[test]
    fn repeated_and_zero_roots() {
        for m in [
            [[0.0; 3]; 3],
            [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            [[2.0, 1.0, 0.0], [0.0, 2.0, 1.0], [0.0, 0.0, 2.0]],
        ] {
            let ev = eigenvalues(&m);
            let c = characteristic_polynomial(&m);
            for z in ev {
                assert!(eval_cubic(&c, z).norm() < 1e-8 * (1.0 + z.norm().powi(3)));
            }
        }
    }

    #[test]
    fn sweep_rejects_unsorted_grid() {
        assert!(stability_sweep(&A, &[1.0, 0.0], EqId::E6).is_err());
    }

    #[test]
    fn eq_id_parse_roundtrip() {
        for id in EqId::ALL {
            assert_eq!(EqId::parse(&id.to_string()), Some(id));
        }
        assert_eq!(EqId::parse("e7"), None);
    }
}
