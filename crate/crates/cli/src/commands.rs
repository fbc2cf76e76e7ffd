//! One function per subcommand. Each writes its artifacts under the output
//! directory and returns the JSON summary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use chaoslab_core::basin::{
    basin_grid, log_radii, AttractorLabel, ClassifierConfig, GridSpec, ScalingConfig,
};
use chaoslab_core::bifurcation::{
    bifurcation_scan, chaos_mask_with, Direction, IcPolicy, SignReset, SweepConfig,
};
use chaoslab_core::circuit::{
    circuit_trajectory, dynamic_range, synthesize, Rounding,
};
use chaoslab_core::equilibria::{equilibria, stability, stability_sweep, EqId};
use chaoslab_core::export;
use chaoslab_core::integrate::{integrate, IntegratorConfig, Mode, Terminal};
use chaoslab_core::lyapunov::{lyapunov_spectrum, LyapunovConfig};
use chaoslab_core::robot::{
    calibrate_xmax, simulate_navigation, BoundaryRule, NavigationConfig, RobotConfig,
};
use chaoslab_core::{basin, dynamics, Params, ScaleSpec};

use crate::settings::{CliError, CliResult, Settings};

pub struct Subcommand {
    pub name: &'static str,
    pub about: &'static str,
    /// Keys accepted besides `a1..a8`.
    pub keys: &'static [(&'static str, &'static str)],
    pub run: fn(&Settings, &Ctx) -> CliResult<Value>,
}

pub struct Ctx<'a> {
    pub out: &'a Path,
    pub plot: bool,
}

impl Ctx<'_> {
    fn create(&self, name: &str) -> CliResult<BufWriter<File>> {
        Ok(BufWriter::new(File::create(self.out.join(name))?))
    }

    fn write_text(&self, name: &str, text: &str) -> CliResult<()> {
        std::fs::write(self.out.join(name), text)?;
        Ok(())
    }
}

pub const SUBCOMMANDS: &[Subcommand] = &[
    Subcommand {
        name: "simulate",
        about: "Trajectory of the 3-D system or the 6-D robot system",
        keys: &[
            ("ic", "initial state, 3 values (6 with system=robot)"),
            ("system", "chaotic | robot"),
            ("t_end", "final time"),
            ("transient", "samples before this time are dropped"),
            ("mode", "adaptive | fixed"),
            ("step", "fixed step, or first trial step when adaptive"),
            ("rel_tol", "relative tolerance"),
            ("abs_tol", "absolute tolerance"),
            ("max_step", "largest adaptive step"),
            ("escape_radius", "norm treated as escape"),
            ("d", "robot wheel separation"),
            ("xmax", "robot speed wrap amplitude (default: calibrated)"),
            ("wheel_radius", "robot wheel radius"),
            ("boundary", "robot boundary rule: none | no-motion"),
            ("record_every", "robot: store every n-th step"),
        ],
        run: simulate,
    },
    Subcommand {
        name: "equilibria",
        about: "Equilibria, eigenvalues and stability, optionally over an a8 sweep",
        keys: &[
            ("a8_start", "sweep start"),
            ("a8_end", "sweep end"),
            ("n_points", "sweep points"),
        ],
        run: equilibria_cmd,
    },
    Subcommand {
        name: "lyapunov",
        about: "Lyapunov spectrum and Kaplan-Yorke dimension",
        keys: &[
            ("ic", "initial state"),
            ("step", "RK4 step"),
            ("iterations", "accumulated steps"),
            ("transient", "time integrated before accumulating"),
            ("renorm_interval", "steps between re-orthonormalizations"),
        ],
        run: lyapunov_cmd,
    },
    Subcommand {
        name: "bifurcate",
        about: "Local maxima of x over an a8 sweep, with optional chaos mask",
        keys: &[
            ("a8_start", "sweep start"),
            ("a8_end", "sweep end"),
            ("n_points", "grid points"),
            ("direction", "forward | backward"),
            ("ic", "seed state"),
            ("ic_policy", "continued | fixed"),
            ("t_end", "time per point"),
            ("transient", "time dropped per point"),
            ("sign_reset", "off | flip-x | mirror"),
            ("step", "RK4 step"),
            ("mask", "also compute the largest exponent per point"),
            ("mask_ic", "initial state of the chaos-mask runs"),
            ("mask_iterations", "Lyapunov steps per mask point"),
        ],
        run: bifurcate,
    },
    Subcommand {
        name: "basin",
        about: "Basin labels on the plane z = level (default a8 = 1.2)",
        keys: &[
            ("x_min", "window"),
            ("x_max", "window"),
            ("y_min", "window"),
            ("y_max", "window"),
            ("nx", "columns"),
            ("ny", "rows"),
            ("level", "section plane z value (default r-)"),
            ("t_max", "time budget per initial condition"),
            ("transient", "crossings before this time are ignored"),
            ("fp_radius", "fixed-point capture radius"),
            ("fp_dwell", "fixed-point dwell time"),
            ("n_crossings", "same-side crossings for a chaotic label"),
            ("rel_tol", "relative tolerance"),
            ("max_step", "largest adaptive step"),
        ],
        run: basin_cmd,
    },
    Subcommand {
        name: "basin-class",
        about: "In-basin probability versus distance and basin class (default a8 = 1.2)",
        keys: &[
            ("radii_min", "smallest radius"),
            ("radii_max", "largest radius"),
            ("n_radii", "log-spaced radii"),
            ("samples", "samples per radius"),
            ("seed", "random seed"),
            ("rel_tol", "classifier relative tolerance"),
            ("t_max", "time budget per sample"),
            ("include_fixed_points", "count fixed-point attractors as in basin"),
        ],
        run: basin_class,
    },
    Subcommand {
        name: "circuit",
        about: "Resistor values, realized coefficients and circuit-time trajectory",
        keys: &[
            ("s1", "amplitude scale of x"),
            ("s2", "amplitude scale of y"),
            ("s3", "amplitude scale of z"),
            ("kappa", "time scale, 1/s"),
            ("capacitance", "farads"),
            ("rounding", "floor1k | e24 | e96 | none"),
            ("rail", "voltage limit for the range check"),
            ("ic", "physical initial state"),
            ("tau_end", "circuit time of the exported trajectory"),
        ],
        run: circuit_cmd,
    },
    Subcommand {
        name: "robot",
        about: "Chaos-driven robot navigation and workspace coverage",
        keys: &[
            ("ic", "initial state x,y,z,X,Y,theta"),
            ("t_end", "final time"),
            ("step", "RK4 step"),
            ("d", "wheel separation"),
            ("xmax", "speed wrap amplitude (default: calibrated)"),
            ("wheel_radius", "wheel radius"),
            ("boundary", "none | no-motion"),
            ("workspace", "x_lo,x_hi,y_lo,y_hi"),
            ("nx", "coverage columns"),
            ("ny", "coverage rows"),
            ("record_every", "store every n-th step"),
        ],
        run: robot_cmd,
    },
];

fn integrator(s: &Settings, t_end: f64, transient: f64) -> CliResult<IntegratorConfig> {
    let base = IntegratorConfig::default();
    let mode = match s.str("mode", "adaptive") {
        "adaptive" => Mode::Adaptive,
        "fixed" => Mode::Fixed,
        m => return Err(CliError::Config(format!("mode: unknown value {m:?}"))),
    };
    let default_step = if mode == Mode::Fixed { 0.005 } else { base.step };
    let step = s.f64("step", default_step)?;
    // a fixed step is its own ceiling
    let default_max = if mode == Mode::Fixed { step } else { base.max_step };
    let cfg = IntegratorConfig {
        mode,
        step,
        max_step: s.f64("max_step", default_max)?,
        rel_tol: s.f64("rel_tol", base.rel_tol)?,
        abs_tol: s.f64("abs_tol", base.abs_tol)?,
        t_end,
        transient,
        escape_radius: s.f64("escape_radius", base.escape_radius)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn terminal_json(t: &Terminal) -> Value {
    match *t {
        Terminal::Completed => json!({"kind": "completed"}),
        Terminal::Escaped { t, norm } => json!({"kind": "escaped", "t": t, "norm": norm}),
        Terminal::Converged { t } => json!({"kind": "converged", "t": t}),
    }
}

fn params_json(p: &Params) -> Value {
    let mut m = Map::new();
    for (k, v) in p.to_array().iter().enumerate() {
        m.insert(format!("a{}", k + 1), json!(v));
    }
    Value::Object(m)
}

fn robot_config(s: &Settings, p: &Params) -> CliResult<RobotConfig> {
    let base = RobotConfig::default();
    let xmax = match s.opt_f64("xmax")? {
        Some(v) => v,
        None => calibrate_xmax(p)?,
    };
    let boundary = match s.raw("boundary") {
        None => base.boundary,
        Some(b) => BoundaryRule::parse(b)
            .ok_or_else(|| CliError::Config(format!("boundary: unknown rule {b:?}")))?,
    };
    let workspace = match s.list("workspace")? {
        None => base.workspace,
        Some(v) if v.len() == 4 => (v[0], v[1], v[2], v[3]),
        Some(_) => return Err(CliError::Config("workspace: expected 4 numbers".into())),
    };
    let cfg = RobotConfig {
        d: s.f64("d", base.d)?,
        wheel_radius: s.f64("wheel_radius", base.wheel_radius)?,
        xmax,
        workspace,
        nx: s.usize("nx", base.nx)?,
        ny: s.usize("ny", base.ny)?,
        boundary,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn navigate(s: &Settings, ctx: &Ctx, p: &Params, csv: &str) -> CliResult<Value> {
    let cfg = robot_config(s, p)?;
    let s0 = s.state("ic", [0.1, -0.1, 0.0, 0.0, 0.0, 0.0])?;
    let nav_cfg = NavigationConfig {
        t_end: s.f64("t_end", 500.0)?,
        step: s.f64("step", 0.005)?,
        record_every: s.usize("record_every", NavigationConfig::default().record_every)?,
    };
    let nav = simulate_navigation(p, &cfg, s0, &nav_cfg)?;
    let mut w = ctx.create(csv)?;
    export::write_navigation(&mut w, &nav, &cfg)?;
    w.flush()?;
    ctx.write_text("coverage_mask.txt", &nav.coverage.mask_text())?;
    if ctx.plot {
        ctx.write_text("robot.gp", &export::gnuplot_robot(csv, "robot.png", &cfg))?;
    }
    let last = nav.trajectory.states.last().copied().unwrap_or(s0);
    Ok(json!({
        "params": params_json(p),
        "coverage": nav.coverage.final_fraction,
        "xmax": cfg.xmax,
        "d": cfg.d,
        "boundary": cfg.boundary.as_str(),
        "blocked_steps": nav.blocked_steps,
        "t_end": nav_cfg.t_end,
        "step": nav_cfg.step,
        "final_state": last,
    }))
}

fn simulate(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    match s.str("system", "chaotic") {
        "robot" => navigate(s, ctx, &p, "trajectory.csv"),
        "chaotic" => {
            let s0 = s.state("ic", [1.0, -1.0, 0.0])?;
            let cfg = integrator(s, s.f64("t_end", 500.0)?, s.f64("transient", 0.0)?)?;
            let traj = integrate(|w| dynamics::vector_field(&p, w), s0, &cfg, &[])?;
            let mut w = ctx.create("trajectory.csv")?;
            export::write_trajectory(&mut w, &traj)?;
            w.flush()?;
            if ctx.plot {
                ctx.write_text(
                    "trajectory.gp",
                    &export::gnuplot_trajectory("trajectory.csv", "trajectory.png"),
                )?;
            }
            let summary = json!({
                "params": params_json(&p),
                "initial_state": s0,
                "samples": traj.len(),
                "terminal": terminal_json(&traj.terminal),
                "final_state": traj.last_state(),
            });
            if let Terminal::Escaped { t, norm } = traj.terminal {
                write_summary(ctx, &summary)?;
                return Err(CliError::Numerical(format!(
                    "trajectory escaped at t = {t} (norm {norm:e})"
                )));
            }
            Ok(summary)
        }
        other => Err(CliError::Config(format!("system: unknown value {other:?}"))),
    }
}

fn equilibria_cmd(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    let set = equilibria(&p)?;
    let reports = EqId::ALL
        .iter()
        .map(|&id| stability(&p, id))
        .collect::<Result<Vec<_>, _>>()?;
    let mut w = ctx.create("equilibria.csv")?;
    export::write_stability(&mut w, &reports)?;
    w.flush()?;

    if s.has("a8_start") || s.has("a8_end") || s.has("n_points") {
        let start = s.f64("a8_start", -0.5)?;
        let end = s.f64("a8_end", 1.5)?;
        let n = s.usize("n_points", 201)?;
        if n < 2 || !(end > start) {
            return Err(CliError::Config("sweep needs n_points >= 2 and a8_end > a8_start".into()));
        }
        let grid: Vec<f64> = (0..n)
            .map(|k| start + (end - start) * k as f64 / (n - 1) as f64)
            .collect();
        let mut rows = Vec::new();
        for id in EqId::ALL {
            rows.extend(stability_sweep(&p, &grid, id)?);
        }
        let mut w = ctx.create("stability_sweep.csv")?;
        export::write_stability(&mut w, &rows)?;
        w.flush()?;
    }

    let mut eq = Map::new();
    for r in &reports {
        eq.insert(
            r.id.to_string(),
            json!({
                "point": r.point,
                "eigenvalues": r.eigenvalues.map(|ev| ev.map(|z| [z.re, z.im])),
                "class": r.class.map(|c| c.to_string()),
                "max_re": r.max_re(),
            }),
        );
    }
    Ok(json!({
        "params": params_json(&p),
        "r_plus": set.r_plus,
        "r_minus": set.r_minus,
        "equilibria": eq,
    }))
}

fn lyapunov_cmd(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    let base = LyapunovConfig::default();
    let cfg = LyapunovConfig {
        step: s.f64("step", base.step)?,
        iterations: s.u64("iterations", base.iterations)?,
        renorm_interval: s.u64("renorm_interval", base.renorm_interval)?,
        transient: s.f64("transient", base.transient)?,
        escape_radius: base.escape_radius,
    };
    let s0 = s.state("ic", [0.1001, 0.1003, 0.1003])?;
    let run = lyapunov_spectrum(&p, s0, &cfg)?;
    let mut w = ctx.create("lyapunov_trace.csv")?;
    export::write_lyapunov_trace(&mut w, &run.trace)?;
    w.flush()?;
    if ctx.plot {
        ctx.write_text(
            "lyapunov.gp",
            &export::gnuplot_lyapunov("lyapunov_trace.csv", "lyapunov.png"),
        )?;
    }
    Ok(json!({
        "params": params_json(&p),
        "L1": run.exponents[0],
        "L2": run.exponents[1],
        "L3": run.exponents[2],
        "sum": run.sum(),
        "dky": run.kaplan_yorke(),
        "mean_divergence": run.mean_divergence,
        "step": cfg.step,
        "iterations": cfg.iterations,
        "initial_state": run.initial_state,
        "final_state": run.final_state,
    }))
}

fn bifurcate(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    let base = SweepConfig::default();
    let seed = s.state("ic", base.ic_policy.seed())?;
    let ic_policy = match s.str("ic_policy", "continued") {
        "continued" => IcPolicy::Continued(seed),
        "fixed" => IcPolicy::Fixed(seed),
        v => return Err(CliError::Config(format!("ic_policy: unknown value {v:?}"))),
    };
    let direction = match s.str("direction", "forward") {
        "forward" => Direction::Forward,
        "backward" => Direction::Backward,
        v => return Err(CliError::Config(format!("direction: unknown value {v:?}"))),
    };
    let sign_reset = match s.str("sign_reset", "mirror") {
        "off" => SignReset::Off,
        "flip-x" => SignReset::FlipX,
        "mirror" => SignReset::Mirror,
        v => return Err(CliError::Config(format!("sign_reset: unknown value {v:?}"))),
    };
    let cfg = SweepConfig {
        a8_start: s.f64("a8_start", base.a8_start)?,
        a8_end: s.f64("a8_end", base.a8_end)?,
        n_points: s.usize("n_points", base.n_points)?,
        direction,
        ic_policy,
        t_end: s.f64("t_end", base.t_end)?,
        transient: s.f64("transient", base.transient)?,
        sign_reset,
        step: s.f64("step", base.step)?,
        escape_radius: base.escape_radius,
    };
    let data = bifurcation_scan(&p, &cfg)?;
    let mut w = ctx.create("bifurcation.csv")?;
    export::write_bifurcation(&mut w, &data)?;
    w.flush()?;
    if ctx.plot {
        ctx.write_text(
            "bifurcation.gp",
            &export::gnuplot_bifurcation("bifurcation.csv", "bifurcation.png"),
        )?;
    }
    let mut summary = json!({
        "params": params_json(&p),
        "points": data.points.len(),
        "rows": data.rows.len(),
        "escaped_points": data.points.iter().filter(|pt| pt.escaped).map(|pt| pt.a8).collect::<Vec<_>>(),
    });
    if s.bool("mask", false)? {
        let lcfg = LyapunovConfig {
            iterations: s.u64("mask_iterations", 100_000)?,
            ..LyapunovConfig::default()
        };
        let mask_ic = s.state("mask_ic", [0.1001, 0.1003, 0.1003])?;
        let mut grid = cfg.grid();
        grid.sort_by(f64::total_cmp);
        let mask = chaos_mask_with(&p, &grid, mask_ic, &lcfg)?;
        let mut w = ctx.create("chaos_mask.csv")?;
        export::write_chaos_mask(&mut w, &mask)?;
        w.flush()?;
        summary["chaotic_points"] = json!(mask.iter().filter(|m| m.chaotic).count());
    }
    Ok(summary)
}

fn classifier_config(s: &Settings, base: ClassifierConfig) -> CliResult<ClassifierConfig> {
    let cfg = ClassifierConfig {
        fp_radius: s.f64("fp_radius", base.fp_radius)?,
        fp_dwell: s.f64("fp_dwell", base.fp_dwell)?,
        n_crossings: s.usize("n_crossings", base.n_crossings)?,
        t_max: s.f64("t_max", base.t_max)?,
        transient: s.f64("transient", base.transient)?,
        rel_tol: s.f64("rel_tol", base.rel_tol)?,
        max_step: s.f64("max_step", base.max_step)?,
        ..base
    };
    cfg.validate()?;
    Ok(cfg)
}

fn basin_cmd(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::multistable())?;
    let base = GridSpec::default();
    let spec = GridSpec {
        x_range: (s.f64("x_min", base.x_range.0)?, s.f64("x_max", base.x_range.1)?),
        y_range: (s.f64("y_min", base.y_range.0)?, s.f64("y_max", base.y_range.1)?),
        nx: s.usize("nx", base.nx)?,
        ny: s.usize("ny", base.ny)?,
        level: s.opt_f64("level")?,
    };
    let cfg = classifier_config(s, ClassifierConfig::default())?;
    let grid = basin_grid(&p, &spec, &cfg)?;
    let mut w = ctx.create("basin.csv")?;
    export::write_basin_csv(&mut w, &grid)?;
    w.flush()?;
    let mut w = ctx.create("basin.ppm")?;
    export::write_basin_ppm(&mut w, &grid)?;
    w.flush()?;
    let mut w = ctx.create("basin.pgm")?;
    export::write_basin_pgm(&mut w, &grid)?;
    w.flush()?;
    let mut counts = Map::new();
    for l in AttractorLabel::ALL {
        counts.insert(l.as_str().into(), json!(grid.count(l)));
    }
    Ok(json!({
        "params": params_json(&p),
        "level": grid.level,
        "nx": spec.nx,
        "ny": spec.ny,
        "counts": counts,
        "composite_fraction": grid.fraction(AttractorLabel::is_attractor),
        "mirror_violations": grid.mirror_violations(),
    }))
}

fn basin_class(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::multistable())?;
    let base = ScalingConfig::default();
    let lo = s.f64("radii_min", base.radii[0])?;
    let hi = s.f64("radii_max", *base.radii.last().unwrap_or(&1e6))?;
    let n = s.usize("n_radii", base.radii.len())?;
    if !(lo > 0.0) || !(hi > lo) || n < 3 {
        return Err(CliError::Config(
            "radii need 0 < radii_min < radii_max and n_radii >= 3".into(),
        ));
    }
    let cfg = ScalingConfig {
        radii: log_radii(lo, hi, n),
        samples_per_radius: s.usize("samples", base.samples_per_radius)?,
        seed: s.u64("seed", base.seed)?,
        include_fixed_points: s.bool("include_fixed_points", base.include_fixed_points)?,
        classifier: classifier_config(s, base.classifier.clone())?,
    };
    let fit = basin::basin_scaling(&p, &cfg)?;
    let mut w = ctx.create("scaling.csv")?;
    export::write_scaling(&mut w, &fit)?;
    w.flush()?;
    if ctx.plot {
        ctx.write_text(
            "scaling.gp",
            &export::gnuplot_scaling("scaling.csv", "scaling.png", &fit),
        )?;
    }
    Ok(json!({
        "params": params_json(&p),
        "gamma": fit.gamma,
        "p0": fit.p0,
        "class": fit.class.map(|c| c.number()),
        "residual": fit.residual,
        "radii": fit.radii,
        "P": fit.probabilities,
        "samples": cfg.samples_per_radius,
        "seed": cfg.seed,
    }))
}

fn circuit_cmd(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    let base = ScaleSpec::default();
    let sc = ScaleSpec {
        s1: s.f64("s1", base.s1)?,
        s2: s.f64("s2", base.s2)?,
        s3: s.f64("s3", base.s3)?,
        kappa: s.f64("kappa", base.kappa)?,
    };
    let rounding_name = s.str("rounding", "floor1k");
    let rounding = Rounding::parse(rounding_name)
        .ok_or_else(|| CliError::Config(format!("rounding: unknown policy {rounding_name:?}")))?;
    let cr = synthesize(&p, &sc, s.f64("capacitance", 1e-9)?, rounding)?;
    ctx.write_text("bom.txt", &cr.bill_of_materials())?;

    let tau_end = s.f64("tau_end", 20.0)?;
    let s0 = s.state("ic", [1.0, -1.0, 0.0])?;
    let icfg = IntegratorConfig {
        t_end: tau_end,
        transient: 0.0,
        max_step: 0.01,
        ..IntegratorConfig::default()
    };
    let traj = circuit_trajectory(&cr, s0, &icfg)?;
    let mut w = ctx.create("circuit_trajectory.csv")?;
    export::write_circuit_trajectory(&mut w, &traj)?;
    w.flush()?;
    let range = dynamic_range(&p, &sc, s.f64("rail", 10.0)?)?;

    let named = |vals: &[f64]| -> Value {
        let mut m = Map::new();
        for (k, v) in vals.iter().enumerate() {
            m.insert(format!("R{}", k + 1), json!(v));
        }
        Value::Object(m)
    };
    let mut errors = Map::new();
    for (k, e) in cr.relative_errors.iter().enumerate() {
        errors.insert(format!("a{}", k + 1), json!(e));
    }
    Ok(json!({
        "params": params_json(&p),
        "rounding": rounding_name,
        "resistors": named(&cr.resistors),
        "ideal": named(&cr.ideal),
        "R": cr.reference_resistance,
        "capacitance": cr.capacitance,
        "kappa": cr.kappa,
        "invert_a8": cr.invert_a8,
        "realized": params_json(&cr.realized),
        "relative_errors": errors,
        "max_relative_error": cr.relative_errors.iter().copied().fold(0.0, f64::max),
        "dynamic_range": {
            "max_abs": range.max_abs,
            "rail": range.rail,
            "pass": range.pass,
            "diagnostic": range.diagnostic,
        },
        "trajectory_terminal": terminal_json(&traj.terminal),
    }))
}

fn robot_cmd(s: &Settings, ctx: &Ctx) -> CliResult<Value> {
    let p = s.params(Params::chaotic())?;
    navigate(s, ctx, &p, "robot.csv")
}

pub fn write_summary(ctx: &Ctx, summary: &Value) -> CliResult<()> {
    let text = serde_json::to_string_pretty(summary).map_err(std::io::Error::other)?;
    ctx.write_text("summary.json", &(text + "\n"))
}
