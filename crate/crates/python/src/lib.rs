//! Python bindings for gaborlab.

use gaborlab::dual_window::{solve_coefficients, DualWindowModel, GammaSampler};
use gaborlab::elliptic::WeierstrassContext;
use gaborlab::frame::{analyze, classify, lower_bound_estimate, reconstruct, wexler_raz_residual};
use gaborlab::hermite_bargmann::{hermite_eval, stft_hermite, FockFunction, SampledSignal};
use gaborlab::zak::half_integer_criterion;
use gaborlab::{GaborError, Lattice2D};
use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

create_exception!(gaborlab_py, DensityError, PyValueError, "The lattice violates s < 1/(n+1).");

fn to_py(e: GaborError) -> PyErr {
    match e {
        GaborError::Density { .. } => DensityError::new_err(e.to_string()),
        GaborError::InvalidInput(_)
        | GaborError::SingularLattice { .. }
        | GaborError::UnsupportedOrder { .. }
        | GaborError::Degenerate(_)
        | GaborError::Pole(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn json_to_py<'py>(py: Python<'py>, v: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(v).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Planar lattice `A ℤ²`.
#[pyclass(name = "Lattice", frozen, from_py_object)]
#[derive(Clone)]
struct PyLattice {
    inner: Lattice2D,
}

#[pymethods]
impl PyLattice {
    /// Generator matrix `[[a11, a12], [a21, a22]]`; columns are the generators.
    #[new]
    fn new(matrix: [[f64; 2]; 2]) -> PyResult<Self> {
        Ok(Self { inner: Lattice2D::from_generators(matrix).map_err(to_py)? })
    }

    #[staticmethod]
    fn rect(a: f64, b: f64) -> PyResult<Self> {
        Ok(Self { inner: Lattice2D::rect(a, b).map_err(to_py)? })
    }

    #[staticmethod]
    fn square(s: f64) -> PyResult<Self> {
        Ok(Self { inner: Lattice2D::square(s).map_err(to_py)? })
    }

    fn scaled(&self, q: f64) -> PyResult<Self> {
        Ok(Self { inner: self.inner.scaled(q).map_err(to_py)? })
    }

    #[getter]
    fn area(&self) -> f64 {
        self.inner.area()
    }

    #[getter]
    fn generator(&self) -> [[f64; 2]; 2] {
        self.inner.generator()
    }

    fn adjoint(&self) -> Self {
        Self { inner: self.inner.adjoint() }
    }

    /// Points with `|λ| ≤ radius` as complex numbers `x + iξ`.
    fn enumerate(&self, radius: f64) -> PyResult<Vec<Complex64>> {
        self.inner.enumerate(radius).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        let a = self.inner.generator();
        format!("Lattice([[{}, {}], [{}, {}]])", a[0][0], a[0][1], a[1][0], a[1][1])
    }
}

/// Weierstrass functions of a lattice.
#[pyclass(name = "Weierstrass", frozen)]
struct PyWeierstrass {
    inner: WeierstrassContext,
}

#[pymethods]
impl PyWeierstrass {
    #[new]
    #[pyo3(signature = (lattice, tol = 1e-12))]
    fn new(lattice: &PyLattice, tol: f64) -> PyResult<Self> {
        Ok(Self { inner: WeierstrassContext::new(&lattice.inner, tol).map_err(to_py)? })
    }

    #[getter]
    fn eta1(&self) -> Complex64 {
        self.inner.eta1()
    }

    #[getter]
    fn eta2(&self) -> Complex64 {
        self.inner.eta2()
    }

    #[getter]
    fn legendre_residual(&self) -> f64 {
        self.inner.legendre_residual()
    }

    #[getter]
    fn growth_constant(&self) -> f64 {
        self.inner.growth_constant()
    }

    fn sigma(&self, z: Complex64) -> Complex64 {
        self.inner.sigma(z)
    }

    fn zeta(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.zeta(z).map_err(to_py)
    }

    fn weierstrass_p(&self, z: Complex64) -> PyResult<Complex64> {
        self.inner.weierstrass_p(z).map_err(to_py)
    }
}

/// Dual system `γ_0, …, γ_n` of `G(h, Λ)`.
#[pyclass(name = "DualWindows", frozen)]
struct PyDualWindows {
    model: DualWindowModel,
    samplers: Vec<GammaSampler>,
}

#[pymethods]
impl PyDualWindows {
    #[new]
    fn new(lattice: &PyLattice, n: usize) -> PyResult<Self> {
        let model = solve_coefficients(&lattice.inner, n).map_err(to_py)?;
        let samplers = (0..=n).map(|j| model.gamma_sampler(j)).collect::<Result<_, _>>().map_err(to_py)?;
        Ok(Self { model, samplers })
    }

    #[getter]
    fn n(&self) -> usize {
        self.model.n()
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.model.rho()
    }

    #[getter]
    fn kappa(&self) -> f64 {
        self.model.kappa_decay()
    }

    /// `γ_j(t)` for each `t`.
    fn gamma(&self, j: usize, t: Vec<f64>) -> PyResult<Vec<Complex64>> {
        let s = self.samplers.get(j).ok_or_else(|| PyValueError::new_err(format!("no dual window {j}")))?;
        Ok(s.eval_many(&t))
    }

    fn delta_residual(&self) -> f64 {
        self.model.delta_residual()
    }

    #[pyo3(signature = (radius = 3.0))]
    fn wexler_raz_residual(&self, radius: f64) -> PyResult<f64> {
        wexler_raz_residual(&self.model, radius).map_err(to_py)
    }

    fn norms<'py>(&self, py: Python<'py>, j: usize) -> PyResult<Bound<'py, PyAny>> {
        json_to_py(py, &self.model.dual_norms(j).map_err(to_py)?)
    }

    fn lower_bound_estimate(&self) -> PyResult<f64> {
        Ok(lower_bound_estimate(&self.model).map_err(to_py)?.value)
    }

    /// Relative error of the truncated expansion of `f = (H_0, …, H_n)`.
    #[pyo3(signature = (radius = 6.0))]
    fn reconstruction_error(&self, radius: f64) -> PyResult<f64> {
        let h = (0..=self.model.n()).map(SampledSignal::hermite).collect::<Result<Vec<_>, _>>().map_err(to_py)?;
        Ok(reconstruct(&self.model, &h, radius).map_err(to_py)?.rel_error)
    }
}

/// `"frame"`, `"not-frame"` or `"critical"`.
#[pyfunction(name = "classify")]
fn py_classify(lattice: &PyLattice, n: usize) -> String {
    match classify(&lattice.inner, n) {
        gaborlab::frame::Classification::Frame => "frame",
        gaborlab::frame::Classification::NotFrame => "not-frame",
        gaborlab::frame::Classification::Critical => "critical",
    }
    .to_string()
}

/// Full frame report as a dict.
#[pyfunction(name = "analyze")]
#[pyo3(signature = (lattice, n, radius = 6.0))]
fn py_analyze<'py>(py: Python<'py>, lattice: &PyLattice, n: usize, radius: f64) -> PyResult<Bound<'py, PyAny>> {
    let report = py.detach(|| analyze(&lattice.inner, n, radius)).map_err(to_py)?;
    json_to_py(py, &report)
}

/// `H_n(t)`.
#[pyfunction]
fn hermite(n: usize, t: f64) -> PyResult<f64> {
    hermite_eval(n, t).map_err(to_py)
}

/// `⟨H_k, π_ζ H_n⟩`.
#[pyfunction(name = "stft_hermite")]
fn py_stft_hermite(k: usize, n: usize, zeta: Complex64) -> PyResult<Complex64> {
    stft_hermite(&FockFunction::Monomial(k), n, zeta).map_err(to_py)
}

/// Zak criterion for `aℤ × (2a)^{-1}ℤ` as a dict.
#[pyfunction]
#[pyo3(signature = (n, a = 1.0, nx = 512, nxi = 512))]
fn zak_criterion<'py>(py: Python<'py>, n: usize, a: f64, nx: usize, nxi: usize) -> PyResult<Bound<'py, PyAny>> {
    let r = half_integer_criterion(n, a, nx, nxi).map_err(to_py)?;
    json_to_py(py, &r)
}

#[pymodule]
fn gaborlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLattice>()?;
    m.add_class::<PyWeierstrass>()?;
    m.add_class::<PyDualWindows>()?;
    m.add_function(wrap_pyfunction!(py_classify, m)?)?;
    m.add_function(wrap_pyfunction!(py_analyze, m)?)?;
    m.add_function(wrap_pyfunction!(hermite, m)?)?;
    m.add_function(wrap_pyfunction!(py_stft_hermite, m)?)?;
    m.add_function(wrap_pyfunction!(zak_criterion, m)?)?;
    m.add("DensityError", m.py().get_type::<DensityError>())?;
    Ok(())
}
