//! Python bindings: `import hgbps_py`.

use std::str::FromStr;

use hgbps::bps::bps_spectrum;
use hgbps::lattice::LatticeElement;
use hgbps::rhp::{self, RhpSolution, SolutionKind, TauKind};
use hgbps::verify::{run_all, window, Scope};
use hgbps::wkb::WkbOracle;
use hgbps::{borel, series, tr, CurveLabel, Error, Pole};
use num_complex::Complex64 as C;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use rand::SeedableRng;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::InvalidMass(_)
        | Error::DimensionMismatch { .. }
        | Error::Config(_)
        | Error::Unsupported(_)
        | Error::UnsupportedClass(_)
        | Error::RayIsBps(_)
        | Error::BoundaryIsBps(_)
        | Error::NuOutOfStrip(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn class(s: &str) -> PyResult<LatticeElement> {
    LatticeElement::from_str(s).map_err(py_err)
}

/// A catalog curve with numeric masses and ν, both listed in pole order 0, 1, ∞.
#[pyclass(name = "SpectralCurve", module = "hgbps_py", frozen)]
struct PyCurve {
    inner: hgbps::SpectralCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (label, m, nu = None))]
    fn new(label: &str, m: Vec<C>, nu: Option<Vec<C>>) -> PyResult<Self> {
        let label = CurveLabel::from_str(label).map_err(py_err)?;
        let inner = match nu {
            Some(nu) => hgbps::SpectralCurve::new(label, &m, &nu),
            None => hgbps::SpectralCurve::with_masses(label, &m),
        }
        .map_err(py_err)?;
        Ok(PyCurve { inner })
    }

    /// Random admissible parameters from `seed`.
    #[staticmethod]
    fn random(label: &str, seed: u64) -> PyResult<Self> {
        let label = CurveLabel::from_str(label).map_err(py_err)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        Ok(PyCurve { inner: hgbps::SpectralCurve::random(label, &mut rng) })
    }

    #[getter]
    fn label(&self) -> &'static str {
        self.inner.label.name()
    }

    #[getter]
    fn m(&self) -> Vec<C> {
        self.inner.masses()
    }

    #[getter]
    fn nu(&self) -> Vec<C> {
        self.inner.nus()
    }

    /// `Q(x)`.
    fn q(&self, x: C) -> PyResult<C> {
        self.inner.q(x).map_err(py_err)
    }

    /// Active classes as dicts with keys `gamma`, `omega`, `z`.
    fn spectrum<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        bps_spectrum(&self.inner)
            .active
            .iter()
            .map(|a| {
                let d = PyDict::new(py);
                d.set_item("gamma", a.gamma.to_string())?;
                d.set_item("omega", a.omega)?;
                d.set_item("z", a.z)?;
                Ok(d)
            })
            .collect()
    }

    /// BPS ray angles in `[0, 2π)`.
    fn rays(&self) -> Vec<f64> {
        bps_spectrum(&self.inner).rays().iter().map(|r| r.angle).collect()
    }

    fn default_theta(&self) -> f64 {
        bps_spectrum(&self.inner).default_theta()
    }

    fn __repr__(&self) -> String {
        format!("SpectralCurve({}, m={:?}, nu={:?})", self.inner.label, self.inner.masses(), self.inner.nus())
    }
}

fn theta_or_default(c: &PyCurve, theta: Option<f64>) -> f64 {
    theta.unwrap_or_else(|| bps_spectrum(&c.inner).default_theta())
}

/// Coefficients `V_{μ,k}` for `k = −1..k_max`.
#[pyfunction]
#[pyo3(signature = (curve, mu, k_max = 8))]
fn voros_series(curve: PyRef<'_, PyCurve>, mu: &str, k_max: usize) -> PyResult<Vec<C>> {
    Ok(series::voros_series(&curve.inner, &class(mu)?, k_max).map_err(py_err)?.coeffs)
}

/// `F_g` over the half-plane left of `theta`.
#[pyfunction]
#[pyo3(signature = (curve, g, theta = None))]
fn free_energy(curve: PyRef<'_, PyCurve>, g: usize, theta: Option<f64>) -> PyResult<C> {
    series::free_energy(&curve.inner, g, theta_or_default(&curve, theta)).map_err(py_err)
}

/// Log of the Borel sum of the path Voros series of `beta`; `method` is `closed` or `quadrature`.
#[pyfunction]
#[pyo3(signature = (curve, beta, hbar, theta = None, method = "closed"))]
fn borel_sum(curve: PyRef<'_, PyCurve>, beta: &str, hbar: C, theta: Option<f64>, method: &str) -> PyResult<C> {
    let th = theta_or_default(&curve, theta);
    let b = class(beta)?;
    match method {
        "closed" => borel::log_borel_sum_path(&curve.inner, &b, th, hbar),
        "quadrature" => borel::borel_sum_quadrature(&curve.inner, &b, th, hbar),
        _ => Err(Error::Config(format!("unknown method `{method}`"))),
    }
    .map_err(py_err)
}

fn solution(curve: &PyCurve, kind: &str) -> PyResult<RhpSolution> {
    let c = &curve.inner;
    match SolutionKind::from_str(kind).map_err(py_err)? {
        SolutionKind::Vor => RhpSolution::voros(c),
        SolutionKind::Min => rhp::minimal_at_nu(c),
        SolutionKind::Hol => RhpSolution::holomorphic(c, None),
    }
    .map_err(py_err)
}

/// `log X_{ℓ,μ}(ħ)` for the solution `kind` (`vor`, `min`, `hol`).
#[pyfunction]
#[pyo3(signature = (curve, mu, hbar, kind = "vor", theta = None))]
fn rhp_eval(curve: PyRef<'_, PyCurve>, mu: &str, hbar: C, kind: &str, theta: Option<f64>) -> PyResult<C> {
    let sol = solution(&curve, kind)?;
    sol.log_eval(&class(mu)?, theta_or_default(&curve, theta), hbar).map_err(py_err)
}

/// Largest jump residual over the basis classes across the BPS ray `angle`, at `|ħ| = radius`.
#[pyfunction]
#[pyo3(signature = (curve, angle, radius, kind = "vor"))]
fn jump_check(curve: PyRef<'_, PyCurve>, angle: f64, radius: f64, kind: &str) -> PyResult<f64> {
    let sol = solution(&curve, kind)?;
    let d = window(&sol.structure, angle);
    let h = C::from_polar(radius, angle);
    let mut worst = 0.0f64;
    for mu in hgbps::verify::basis(curve.inner.label) {
        worst = worst.max(rhp::jump_residual(&sol, &mu, angle + d, angle - d, h).map_err(py_err)?);
    }
    Ok(worst)
}

/// `log τ` of the given kind.
#[pyfunction]
#[pyo3(signature = (curve, hbar, kind = "vor", theta = None))]
fn log_tau(curve: PyRef<'_, PyCurve>, hbar: C, kind: &str, theta: Option<f64>) -> PyResult<C> {
    let th = theta_or_default(&curve, theta);
    let c = &curve.inner;
    match TauKind::from_str(kind).map_err(py_err)? {
        TauKind::Vor => rhp::log_tau_vor(c, th, hbar),
        TauKind::Hol => rhp::at_nu_star(c, None).and_then(|s| rhp::log_tau_hol(&s, th, hbar)),
        TauKind::Min => RhpSolution::voros(c).and_then(|s| rhp::log_tau_min(c, &s.xi, th, hbar)),
    }
    .map_err(py_err)
}

/// `(F_g from topological recursion, closed form)`.
#[pyfunction]
fn tr_oracle(curve: PyRef<'_, PyCurve>, g: usize) -> PyResult<(C, C)> {
    let cmp = tr::tr_compare(&curve.inner, g).map_err(py_err)?;
    Ok((cmp.oracle, cmp.closed))
}

/// Numerical path Voros coefficients `k = 1..k_max` at the even pole `pole` (`0`, `1`, `inf`).
#[pyfunction]
#[pyo3(signature = (curve, pole, k_max = 8))]
fn wkb_oracle(curve: PyRef<'_, PyCurve>, pole: &str, k_max: usize) -> PyResult<Vec<C>> {
    let p = Pole::from_str(pole).map_err(py_err)?;
    let o = WkbOracle::new(&curve.inner).map_err(py_err)?;
    o.path_voros_numeric(p, k_max).map_err(py_err)
}

/// The acceptance matrix as a JSON string.
#[pyfunction]
#[pyo3(signature = (curve = None, seed = 2024))]
fn report(curve: Option<&str>, seed: u64) -> PyResult<String> {
    let only = curve.map(CurveLabel::from_str).transpose().map_err(py_err)?;
    let rep = run_all(&Scope { only, seed });
    serde_json::to_string(&rep).map_err(|e| PyRuntimeError::new_err(e.to_string()))
}

#[pymodule]
fn hgbps_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_function(wrap_pyfunction!(voros_series, m)?)?;
    m.add_function(wrap_pyfunction!(free_energy, m)?)?;
    m.add_function(wrap_pyfunction!(borel_sum, m)?)?;
    m.add_function(wrap_pyfunction!(rhp_eval, m)?)?;
    m.add_function(wrap_pyfunction!(jump_check, m)?)?;
    m.add_function(wrap_pyfunction!(log_tau, m)?)?;
    m.add_function(wrap_pyfunction!(tr_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(wkb_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(report, m)?)?;
    Ok(())
}
