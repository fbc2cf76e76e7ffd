//! Vector fields of the system and their derivatives.
//!
//! ```text
//! x' = -a1 x + a2 x z + a3 y z
//! y' =  a4 y - a5 x z
//! z' = -a6 z + a7 x y + a8 z^2
//! ```
//!
//! The field is invariant under the rotation `(x, y, z) -> (-x, -y, z)`.

use crate::error::{Error, Result};
use crate::robot;

pub type State3 = [f64; 3];

/// `(x, y, z, X, Y, theta)`: chaotic state followed by the robot pose.
pub type State6 = [f64; 6];

pub type Matrix3 = [[f64; 3]; 3];

/// The eight coefficients `a1..a8`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
    pub a8: f64,
}

impl Default for Params {
    fn default() -> Self {
        Self::chaotic()
    }
}

impl Params {
    /// Reference chaotic set: `a = (1, 1, 2.3, 2, 1, 6, 1, -0.25)`.
    pub const fn chaotic() -> Self {
        Self {
            a1: 1.0,
            a2: 1.0,
            a3: 2.3,
            a4: 2.0,
            a5: 1.0,
            a6: 6.0,
            a7: 1.0,
            a8: -0.25,
        }
    }

    /// Reference set with `a8 = 1.2`, where two chaotic and two fixed-point
    /// attractors coexist.
    pub const fn multistable() -> Self {
        Self::chaotic().with_a8(1.2)
    }

    pub const fn with_a8(self, a8: f64) -> Self {
        Self { a8, ..self }
    }

    pub fn from_array(a: [f64; 8]) -> Self {
        Self {
            a1: a[0],
            a2: a[1],
            a3: a[2],
            a4: a[3],
            a5: a[4],
            a6: a[5],
            a7: a[6],
            a8: a[7],
        }
    }

    pub fn to_array(self) -> [f64; 8] {
        [
            self.a1, self.a2, self.a3, self.a4, self.a5, self.a6, self.a7, self.a8,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.to_array().iter().all(|a| a.is_finite()) {
            Ok(())
        } else {
            Err(Error::InvalidConfig("coefficients must be finite".into()))
        }
    }
}

/// Amplitude divisors and time scale of the analog realization.
///
/// `w = (x / s1, y / s2, z / s3)`; `kappa = 1 / (R C)` maps circuit time to
/// the dimensionless time of the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaleSpec {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub kappa: f64,
}

impl Default for ScaleSpec {
    fn default() -> Self {
        Self {
            s1: 3.0,
            s2: 1.0,
            s3: 1.0,
            kappa: 1000.0,
        }
    }
}

impl ScaleSpec {
    pub fn identity(kappa: f64) -> Self {
        Self {
            s1: 1.0,
            s2: 1.0,
            s3: 1.0,
            kappa,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.s1, self.s2, self.s3, self.kappa]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidConfig(
                "scale divisors and kappa must be positive".into(),
            ))
        }
    }

    /// Coefficients of the field obeyed by the scaled state `w`.
    ///
    /// Substituting `x = s1 wx`, `y = s2 wy`, `z = s3 wz` keeps the system in
    /// the same family with each quadratic coefficient multiplied by a ratio
    /// of divisors; the linear coefficients are unchanged.
    pub fn scaled_params(&self, p: &Params) -> Params {
        let (s1, s2, s3) = (self.s1, self.s2, self.s3);
        Params {
            a1: p.a1,
            a2: p.a2 * s3,
            a3: p.a3 * s2 * s3 / s1,
            a4: p.a4,
            a5: p.a5 * s1 * s3 / s2,
            a6: p.a6,
            a7: p.a7 * s1 * s2 / s3,
            a8: p.a8 * s3,
        }
    }

    /// Inverse of [`ScaleSpec::scaled_params`].
    pub fn unscaled_params(&self, b: &Params) -> Params {
        let (s1, s2, s3) = (self.s1, self.s2, self.s3);
        Params {
            a1: b.a1,
            a2: b.a2 / s3,
            a3: b.a3 * s1 / (s2 * s3),
            a4: b.a4,
            a5: b.a5 * s2 / (s1 * s3),
            a6: b.a6,
            a7: b.a7 * s3 / (s1 * s2),
            a8: b.a8 / s3,
        }
    }

    pub fn to_scaled(&self, s: &State3) -> State3 {
        [s[0] / self.s1, s[1] / self.s2, s[2] / self.s3]
    }

    pub fn from_scaled(&self, w: &State3) -> State3 {
        [w[0] * self.s1, w[1] * self.s2, w[2] * self.s3]
    }
}

#[inline]
pub fn vector_field(p: &Params, s: &State3) -> State3 {
    let [x, y, z] = *s;
    [
        -p.a1 * x + p.a2 * x * z + p.a3 * y * z,
        p.a4 * y - p.a5 * x * z,
        -p.a6 * z + p.a7 * x * y + p.a8 * z * z,
    ]
}

/// Row `i` is the gradient of component `i` of [`vector_field`].
pub fn jacobian(p: &Params, s: &State3) -> Matrix3 {
    let [x, y, z] = *s;
    [
        [p.a2 * z - p.a1, p.a3 * z, p.a2 * x + p.a3 * y],
        [-p.a5 * z, p.a4, -p.a5 * x],
        [p.a7 * y, p.a7 * x, 2.0 * p.a8 * z - p.a6],
    ]
}

/// `(a2 + 2 a8) z - (a1 - a4 + a6)`, the trace of the Jacobian.
#[inline]
pub fn divergence(p: &Params, s: &State3) -> f64 {
    (p.a2 + 2.0 * p.a8) * s[2] - (p.a1 - p.a4 + p.a6)
}

/// Field of the amplitude-scaled state, in dimensionless time.
pub fn scaled_field(p: &Params, sc: &ScaleSpec, w: &State3) -> State3 {
    vector_field(&sc.scaled_params(p), w)
}

/// Six-dimensional field: the chaotic state drives a unicycle through the
/// forward speed `v = mod(|x + y|, xmax) / 2` and turn rate `mu = (x - y) / d`.
///
/// The first three components never read the pose.
pub fn robot_field(p: &Params, d: f64, xmax: f64, s: &State6) -> State6 {
    let [f1, f2, f3] = vector_field(p, &[s[0], s[1], s[2]]);
    let (v, mu) = robot::drive_law(s[0], s[1], d, xmax);
    let theta = s[5];
    [f1, f2, f3, v * theta.cos(), v * theta.sin(), mu]
}
