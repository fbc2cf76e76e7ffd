//! Analog realization of the amplitude-scaled system.
//!
//! Each state is a capacitor voltage on an inverting integrator; products come
//! from multipliers with a built-in `1/10` scale. With equal capacitors `C`
//! and `kappa = 1 / (R C)` the circuit obeys, in `tau = kappa t`,
//!
//! ```text
//! W1' = -(R/R1) W1 + (R/10R2) W1 W3 + (R/10R3) W2 W3
//! W2' =  (R/R4)(R10/R9) W2 - (R/10R5) W1 W3
//! W3' = -(R/R6) W3 + (R/10R7) W1 W2 ± (R/10R8) W3^2
//! ```
//!
//! where the sign of the last term is set by inverting the output that feeds
//! the `R8` branch.

use std::fmt::Write as _;

use crate::dynamics::{vector_field, Params, ScaleSpec, State3};
use crate::error::{Error, Result};
use crate::integrate::{integrate, IntegratorConfig, Trajectory};

/// Fixed resistors in the `a4` gain stage.
pub const R9: f64 = 100e3;
pub const R10: f64 = 100e3;

const MULTIPLIER_SCALE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    None,
    /// Round down to a whole kilo-ohm.
    Floor1k,
    /// Nearest value of the E24 series.
    E24,
    /// Nearest value of the E96 series.
    E96,
}

const E24: [f64; 24] = [
    1.0, 1.1, 1.2, 1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.4, 2.7, 3.0, 3.3, 3.6, 3.9, 4.3, 4.7, 5.1, 5.6,
    6.2, 6.8, 7.5, 8.2, 9.1,
];

fn e96_mantissas() -> impl Iterator<Item = f64> + Clone {
    // E96 values are round(10^(k/96), 2)
    (0..96).map(|k| (10f64.powf(k as f64 / 96.0) * 100.0).round() / 100.0)
}

fn nearest_in_series(value: f64, series: impl Iterator<Item = f64> + Clone) -> f64 {
    let decade = 10f64.powf(value.log10().floor());
    let mut best = value;
    let mut best_err = f64::INFINITY;
    for scale in [decade / 10.0, decade, decade * 10.0] {
        for m in series.clone() {
            let candidate = m * scale;
            let err = (candidate / value).ln().abs();
            if err < best_err {
                best_err = err;
                best = candidate;
            }
        }
    }
    best
}

impl Rounding {
    pub fn apply(self, ohms: f64) -> f64 {
        match self {
            Rounding::None => ohms,
            Rounding::Floor1k => ((ohms / 1e3 + 1e-9).floor() * 1e3).max(1e3),
            Rounding::E24 => nearest_in_series(ohms, E24.iter().copied()),
            Rounding::E96 => nearest_in_series(ohms, e96_mantissas()),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" => Some(Self::None),
            "floor1k" | "floor" => Some(Self::Floor1k),
            "e24" => Some(Self::E24),
            "e96" => Some(Self::E96),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRealization {
    /// `R1..R10` after rounding, ohms.
    pub resistors: [f64; 10],
    /// `R1..R8` before rounding, ohms.
    pub ideal: [f64; 8],
    pub capacitance: f64,
    pub reference_resistance: f64,
    pub kappa: f64,
    pub scale: ScaleSpec,
    /// The `R8` branch is fed from an inverted output (`a8 < 0`).
    pub invert_a8: bool,
    pub target: Params,
    pub realized: Params,
    /// `|realized - target| / |target|` per coefficient.
    pub relative_errors: [f64; 8],
}

impl CircuitRealization {
    pub fn r(&self, k: usize) -> f64 {
        self.resistors[k - 1]
    }

    /// Coefficients of the dimensionless circuit equations.
    pub fn circuit_coefficients(&self) -> Params {
        let r = self.reference_resistance;
        let m = MULTIPLIER_SCALE;
        let sign8 = if self.invert_a8 { -1.0 } else { 1.0 };
        Params {
            a1: r / self.r(1),
            a2: r / (m * self.r(2)),
            a3: r / (m * self.r(3)),
            a4: r / self.r(4) * self.r(10) / self.r(9),
            a5: r / (m * self.r(5)),
            a6: r / self.r(6),
            a7: r / (m * self.r(7)),
            a8: sign8 * r / (m * self.r(8)),
        }
    }

    /// Bill of materials as aligned text.
    pub fn bill_of_materials(&self) -> String {
        let mut out = String::new();
        let realized = self.realized.to_array();
        let _ = writeln!(
            out,
            "{:<10} {:>14} {:>14} {:>12} {:>9}",
            "component", "ideal_ohm", "value_ohm", "realized", "error_%"
        );
        for k in 0..8 {
            let _ = writeln!(
                out,
                "{:<10} {:>14.3} {:>14.0} {:>12.6} {:>9.4}",
                format!("R{}", k + 1),
                self.ideal[k],
                self.resistors[k],
                realized[k],
                100.0 * self.relative_errors[k]
            );
        }
        for k in [9usize, 10] {
            let _ = writeln!(out, "{:<10} {:>14.3} {:>14.0}", format!("R{k}"), self.r(k), self.r(k));
        }
        let _ = writeln!(out, "{:<10} {:>14.3e}", "C", self.capacitance);
        let _ = writeln!(out, "{:<10} {:>14.0}", "R", self.reference_resistance);
        let _ = writeln!(out, "{:<10} {:>14.3}", "kappa", self.kappa);
        let _ = writeln!(out, "{:<10} {:>14}", "invert_a8", self.invert_a8);
        out
    }
}

/// Resistor values that realize `p` under the scaling `sc` with capacitors
/// `capacitance` (farads). The reference resistance is `1 / (kappa C)`.
pub fn synthesize(
    p: &Params,
    sc: &ScaleSpec,
    capacitance: f64,
    rounding: Rounding,
) -> Result<CircuitRealization> {
    p.validate()?;
    sc.validate()?;
    if !(capacitance > 0.0) {
        return Err(Error::InvalidConfig("capacitance must be positive".into()));
    }
    let b = sc.scaled_params(p);
    let names = ["a1", "a2", "a3", "a4", "a5", "a6", "a7", "a8"];
    for (name, v) in names.iter().zip(b.to_array()) {
        if v == 0.0 {
            return Err(Error::ZeroCoefficient(name));
        }
    }
    // linear terms must keep the topology's signs: damped x and z, growing y
    if b.a1 < 0.0 || b.a4 < 0.0 || b.a6 < 0.0 || b.a2 < 0.0 || b.a3 < 0.0 || b.a5 < 0.0 || b.a7 < 0.0 {
        return Err(Error::InvalidConfig(
            "only a8 may be negative in this circuit topology".into(),
        ));
    }
    let r = 1.0 / (sc.kappa * capacitance);
    let m = MULTIPLIER_SCALE;
    let ideal = [
        r / b.a1,
        r / (m * b.a2),
        r / (m * b.a3),
        r * (R10 / R9) / b.a4,
        r / (m * b.a5),
        r / b.a6,
        r / (m * b.a7),
        r / (m * b.a8.abs()),
    ];
    let mut resistors = [0.0; 10];
    for k in 0..8 {
        resistors[k] = rounding.apply(ideal[k]);
    }
    resistors[8] = R9;
    resistors[9] = R10;

    let mut cr = CircuitRealization {
        resistors,
        ideal,
        capacitance,
        reference_resistance: r,
        kappa: sc.kappa,
        scale: *sc,
        invert_a8: b.a8 < 0.0,
        target: *p,
        realized: *p,
        relative_errors: [0.0; 8],
    };
    let (realized, errors) = realized_params(&cr);
    cr.realized = realized;
    cr.relative_errors = errors;
    Ok(cr)
}

/// Coefficients the stored resistors actually implement, mapped back through
/// the amplitude scaling, with relative errors against the target.
pub fn realized_params(cr: &CircuitRealization) -> (Params, [f64; 8]) {
    let realized = cr.scale.unscaled_params(&cr.circuit_coefficients());
    let target = cr.target.to_array();
    let got = realized.to_array();
    let mut errors = [0.0; 8];
    for k in 0..8 {
        errors[k] = ((got[k] - target[k]) / target[k]).abs();
    }
    (realized, errors)
}

/// Dimensionless circuit equations in `tau`.
pub fn circuit_field(cr: &CircuitRealization, w: &State3) -> State3 {
    vector_field(&cr.circuit_coefficients(), w)
}

/// Capacitor voltages in circuit time `tau` from the physical state `s0`.
/// Physical time is `tau / kappa`.
pub fn circuit_trajectory(
    cr: &CircuitRealization,
    s0: State3,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<3>> {
    let c = cr.circuit_coefficients();
    integrate(|w| vector_field(&c, w), cr.scale.to_scaled(&s0), cfg, &[])
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeReport {
    /// Largest `|w_i|` per channel over the reference run, volts.
    pub max_abs: [f64; 3],
    pub rail: f64,
    pub pass: bool,
    /// Set when the reference run escaped.
    pub diagnostic: Option<String>,
}

/// Amplitude check of the scaled system against a voltage rail, over
/// `run_time` time units after a 100-unit transient.
pub fn dynamic_range_from(
    p: &Params,
    sc: &ScaleSpec,
    rail: f64,
    s0: State3,
    run_time: f64,
) -> Result<RangeReport> {
    sc.validate()?;
    if !(rail > 0.0) {
        return Err(Error::InvalidConfig("rail must be positive".into()));
    }
    let b = sc.scaled_params(p);
    let cfg = IntegratorConfig {
        t_end: 100.0 + run_time,
        transient: 100.0,
        max_step: 0.01,
        ..IntegratorConfig::default()
    };
    let traj = integrate(|w| vector_field(&b, w), sc.to_scaled(&s0), &cfg, &[])?;
    let mut max_abs = [0.0f64; 3];
    for s in &traj.states {
        for i in 0..3 {
            max_abs[i] = max_abs[i].max(s[i].abs());
        }
    }
    if traj.escaped() {
        return Ok(RangeReport {
            max_abs,
            rail,
            pass: false,
            diagnostic: Some(format!("reference run escaped: {:?}", traj.terminal)),
        });
    }
    Ok(RangeReport {
        max_abs,
        rail,
        pass: max_abs.iter().all(|m| *m < rail),
        diagnostic: None,
    })
}

/// [`dynamic_range_from`] with the reference start `(1, -1, 0)` and 1000 time
/// units of recording.
pub fn dynamic_range(p: &Params, sc: &ScaleSpec, rail: f64) -> Result<RangeReport> {
    dynamic_range_from(p, sc, rail, [1.0, -1.0, 0.0], 1000.0)
}
