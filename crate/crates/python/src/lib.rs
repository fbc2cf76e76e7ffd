//! Python bindings: `import chaoslab`.
//!
//! States are plain lists of floats; results that carry several fields are
//! returned as dicts with the same keys as the CLI summaries.

use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use chaoslab_core::basin::{classify_ic as core_classify, fit_power_law as core_fit, ClassifierConfig};
use chaoslab_core::bifurcation::{bifurcation_scan, IcPolicy, SweepConfig};
use chaoslab_core::circuit::{synthesize as core_synthesize, Rounding};
use chaoslab_core::equilibria::{equilibria as core_equilibria, stability as core_stability, EqId};
use chaoslab_core::integrate::{integrate, IntegratorConfig, Mode};
use chaoslab_core::lyapunov::{kaplan_yorke as core_ky, lyapunov_spectrum as core_lyap, LyapunovConfig};
use chaoslab_core::robot::{calibrate_xmax, simulate_navigation, NavigationConfig, RobotConfig};
use chaoslab_core::{dynamics, Error, ScaleSpec};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidConfig(_) | Error::DegenerateParams(_) | Error::ZeroCoefficient(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

/// Coefficients `a1..a8` of the system.
#[pyclass(name = "Params", from_py_object)]
#[derive(Clone, Copy)]
struct PyParams {
    inner: chaoslab_core::Params,
}

#[pymethods]
impl PyParams {
    #[new]
    #[pyo3(signature = (a1=1.0, a2=1.0, a3=2.3, a4=2.0, a5=1.0, a6=6.0, a7=1.0, a8=-0.25))]
    #[allow(clippy::too_many_arguments)]
    fn new(a1: f64, a2: f64, a3: f64, a4: f64, a5: f64, a6: f64, a7: f64, a8: f64) -> Self {
        Self {
            inner: chaoslab_core::Params::from_array([a1, a2, a3, a4, a5, a6, a7, a8]),
        }
    }

    #[staticmethod]
    fn chaotic() -> Self {
        Self {
            inner: chaoslab_core::Params::chaotic(),
        }
    }

    #[staticmethod]
    fn multistable() -> Self {
        Self {
            inner: chaoslab_core::Params::multistable(),
        }
    }

    fn with_a8(&self, a8: f64) -> Self {
        Self {
            inner: self.inner.with_a8(a8),
        }
    }

    #[allow(clippy::wrong_self_convention)]
    fn to_list(&self) -> Vec<f64> {
        self.inner.to_array().to_vec()
    }

    #[getter]
    fn a8(&self) -> f64 {
        self.inner.a8
    }

    fn __repr__(&self) -> String {
        let a = self.inner.to_array();
        format!(
            "Params(a1={}, a2={}, a3={}, a4={}, a5={}, a6={}, a7={}, a8={})",
            a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]
        )
    }
}

#[pyfunction]
fn vector_field(p: &PyParams, s: [f64; 3]) -> [f64; 3] {
    dynamics::vector_field(&p.inner, &s)
}

#[pyfunction]
fn jacobian(p: &PyParams, s: [f64; 3]) -> [[f64; 3]; 3] {
    dynamics::jacobian(&p.inner, &s)
}

#[pyfunction]
fn divergence(p: &PyParams, s: [f64; 3]) -> f64 {
    dynamics::divergence(&p.inner, &s)
}

/// `{"r_plus", "r_minus", "E1".."E6"}`; absent equilibria map to `None`.
#[pyfunction]
fn equilibria<'py>(py: Python<'py>, p: &PyParams) -> PyResult<Bound<'py, PyDict>> {
    let set = core_equilibria(&p.inner).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("r_plus", set.r_plus)?;
    d.set_item("r_minus", set.r_minus)?;
    for id in EqId::ALL {
        d.set_item(id.to_string(), set.get(id))?;
    }
    Ok(d)
}

/// Eigenvalues (as `(re, im)` pairs) and stability class of one equilibrium.
#[pyfunction]
fn stability<'py>(py: Python<'py>, p: &PyParams, eq_id: &str) -> PyResult<Bound<'py, PyDict>> {
    let id = EqId::parse(eq_id).ok_or_else(|| PyValueError::new_err(format!("unknown equilibrium {eq_id:?}")))?;
    let r = core_stability(&p.inner, id).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("point", r.point)?;
    d.set_item("eigenvalues", r.eigenvalues.map(|ev| ev.map(|z| (z.re, z.im))))?;
    d.set_item("class", r.class.map(|c| c.to_string()))?;
    d.set_item("max_re", r.max_re())?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (p, ic=[0.1001, 0.1003, 0.1003], step=0.01, iterations=1_000_000, transient=100.0))]
fn lyapunov_spectrum<'py>(
    py: Python<'py>,
    p: &PyParams,
    ic: [f64; 3],
    step: f64,
    iterations: u64,
    transient: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = LyapunovConfig {
        step,
        iterations,
        transient,
        ..LyapunovConfig::default()
    };
    let run = py.detach(|| core_lyap(&p.inner, ic, &cfg)).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("L1", run.exponents[0])?;
    d.set_item("L2", run.exponents[1])?;
    d.set_item("L3", run.exponents[2])?;
    d.set_item("sum", run.sum())?;
    d.set_item("dky", run.kaplan_yorke())?;
    d.set_item("mean_divergence", run.mean_divergence)?;
    Ok(d)
}

#[pyfunction]
fn kaplan_yorke(exponents: Vec<f64>) -> f64 {
    core_ky(&exponents)
}

/// Returns `(times, states, escaped)`.
#[pyfunction]
#[pyo3(signature = (p, ic, t_end, mode="adaptive", step=None, rel_tol=2.2204e-6, abs_tol=1e-9, max_step=1e-3, transient=0.0))]
#[allow(clippy::too_many_arguments, clippy::type_complexity)]
fn simulate(
    py: Python<'_>,
    p: &PyParams,
    ic: [f64; 3],
    t_end: f64,
    mode: &str,
    step: Option<f64>,
    rel_tol: f64,
    abs_tol: f64,
    max_step: f64,
    transient: f64,
) -> PyResult<(Vec<f64>, Vec<[f64; 3]>, bool)> {
    let cfg = match mode {
        "fixed" => IntegratorConfig::fixed(step.unwrap_or(0.005), t_end),
        "adaptive" => IntegratorConfig {
            mode: Mode::Adaptive,
            step: step.unwrap_or(1e-3),
            ..IntegratorConfig::adaptive(rel_tol, abs_tol, max_step, t_end)
        },
        _ => return Err(PyValueError::new_err(format!("unknown mode {mode:?}"))),
    }
    .with_transient(transient);
    let pp = p.inner;
    let traj = py
        .detach(|| integrate(|s| dynamics::vector_field(&pp, s), ic, &cfg, &[]))
        .map_err(py_err)?;
    let escaped = traj.escaped();
    Ok((traj.times, traj.states, escaped))
}

/// Attractor label of one initial condition, e.g. `"chaotic-2"`.
#[pyfunction]
#[pyo3(signature = (p, ic, t_max=2000.0))]
fn classify_ic(py: Python<'_>, p: &PyParams, ic: [f64; 3], t_max: f64) -> PyResult<&'static str> {
    let cfg = ClassifierConfig {
        t_max,
        ..ClassifierConfig::default()
    };
    let label = py.detach(|| core_classify(&p.inner, ic, &cfg)).map_err(py_err)?;
    Ok(label.as_str())
}

/// `{"gamma", "p0", "class", "residual"}` of a log-log least-squares fit.
#[pyfunction]
fn fit_power_law<'py>(py: Python<'py>, radii: Vec<f64>, probabilities: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let fit = core_fit(&radii, &probabilities, 3.0).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("gamma", fit.gamma)?;
    d.set_item("p0", fit.p0)?;
    d.set_item("class", fit.class.map(|c| c.number()))?;
    d.set_item("residual", fit.residual)?;
    Ok(d)
}

/// Resistor table (ohms) and realized coefficients.
#[pyfunction]
#[pyo3(signature = (p, rounding="floor1k", capacitance=1e-9))]
fn synthesize<'py>(py: Python<'py>, p: &PyParams, rounding: &str, capacitance: f64) -> PyResult<Bound<'py, PyDict>> {
    let policy = Rounding::parse(rounding).ok_or_else(|| PyValueError::new_err(format!("unknown rounding {rounding:?}")))?;
    let cr = core_synthesize(&p.inner, &ScaleSpec::default(), capacitance, policy).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("resistors", cr.resistors.to_vec())?;
    d.set_item("ideal", cr.ideal.to_vec())?;
    d.set_item("invert_a8", cr.invert_a8)?;
    d.set_item("realized", cr.realized.to_array().to_vec())?;
    d.set_item("relative_errors", cr.relative_errors.to_vec())?;
    d.set_item("bill_of_materials", cr.bill_of_materials())?;
    Ok(d)
}

/// `(a8, local max of x)` rows of a forward sweep.
#[pyfunction]
#[pyo3(signature = (p, a8_start=-0.5, a8_end=1.5, n_points=400, ic=[-2.1441, -0.3086, 0.1113], continued=true, t_end=300.0, transient=150.0))]
#[allow(clippy::too_many_arguments)]
fn bifurcation(
    py: Python<'_>,
    p: &PyParams,
    a8_start: f64,
    a8_end: f64,
    n_points: usize,
    ic: [f64; 3],
    continued: bool,
    t_end: f64,
    transient: f64,
) -> PyResult<Vec<(f64, f64)>> {
    let cfg = SweepConfig {
        a8_start,
        a8_end,
        n_points,
        ic_policy: if continued { IcPolicy::Continued(ic) } else { IcPolicy::Fixed(ic) },
        t_end,
        transient,
        ..SweepConfig::default()
    };
    let data = py.detach(|| bifurcation_scan(&p.inner, &cfg)).map_err(py_err)?;
    Ok(data.rows)
}

/// Robot run; returns coverage, the calibrated `xmax` and the sampled poses.
#[pyfunction]
#[pyo3(signature = (p, ic=[0.1, -0.1, 0.0, 0.0, 0.0, 0.0], t_end=500.0, xmax=None))]
fn navigate<'py>(
    py: Python<'py>,
    p: &PyParams,
    ic: [f64; 6],
    t_end: f64,
    xmax: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let pp = p.inner;
    let nav = py
        .detach(|| {
            let xmax = match xmax {
                Some(v) => v,
                None => calibrate_xmax(&pp)?,
            };
            let cfg = RobotConfig {
                xmax,
                ..RobotConfig::default()
            };
            let nav_cfg = NavigationConfig {
                t_end,
                ..NavigationConfig::default()
            };
            simulate_navigation(&pp, &cfg, ic, &nav_cfg).map(|n| (n, xmax))
        })
        .map_err(py_err)?;
    let (nav, xmax) = nav;
    let d = PyDict::new(py);
    d.set_item("coverage", nav.coverage.final_fraction)?;
    d.set_item("xmax", xmax)?;
    d.set_item("times", nav.trajectory.times)?;
    d.set_item("states", nav.trajectory.states)?;
    Ok(d)
}

#[pymodule]
fn chaoslab(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyParams>()?;
    m.add_function(wrap_pyfunction!(vector_field, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(divergence, m)?)?;
    m.add_function(wrap_pyfunction!(equilibria, m)?)?;
    m.add_function(wrap_pyfunction!(stability, m)?)?;
    m.add_function(wrap_pyfunction!(lyapunov_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(kaplan_yorke, m)?)?;
    m.add_function(wrap_pyfunction!(simulate, m)?)?;
    m.add_function(wrap_pyfunction!(classify_ic, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(bifurcation, m)?)?;
    m.add_function(wrap_pyfunction!(navigate, m)?)?;
    Ok(())
}
