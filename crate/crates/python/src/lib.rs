//! Python bindings: `import pcraman`.

use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use pcraman::analysis::{find_narrow_feature, scan_rabi, Channel, FeatureKind};
use pcraman::config::RunConfig;
use pcraman::fpc::{self, CavityFpc, FpcParams};
use pcraman::stack::{build_canonical_stack, Layer, LayerKind, LayerStack};
use pcraman::tmm;
use pcraman::{ComplexIndex, ErrorCategory, Frequency};

fn py_err(e: pcraman::Error) -> PyErr {
    match e.category() {
        ErrorCategory::Config => PyValueError::new_err(e.to_string()),
        ErrorCategory::Solver => PyRuntimeError::new_err(e.to_string()),
        ErrorCategory::Io => PyOSError::new_err(e.to_string()),
    }
}

fn kind_str(k: FeatureKind) -> &'static str {
    match k {
        FeatureKind::Peak => "peak",
        FeatureKind::Dip => "dip",
    }
}

/// Probe spectrum: angular frequencies with T and R.
#[pyclass(name = "Spectrum", module = "pcraman", frozen)]
struct PySpectrum {
    inner: pcraman::spectrum::Spectrum,
}

#[pymethods]
impl PySpectrum {
    #[getter]
    fn omegas(&self) -> Vec<f64> {
        self.inner.omegas.clone()
    }

    #[getter]
    fn t(&self) -> Vec<f64> {
        self.inner.t_values.clone()
    }

    #[getter]
    fn r(&self) -> Vec<f64> {
        self.inner.r_values.clone()
    }

    /// (line center − ω) / γ₁₀ for every sample.
    #[getter]
    fn detuning_over_gamma10(&self) -> Vec<f64> {
        self.inner.detunings_over_gamma10()
    }

    #[getter]
    fn config_digest(&self) -> String {
        self.inner.metadata.config_digest.clone()
    }

    /// Narrow feature in channel "T" or "R" as a dict, or None.
    fn feature<'py>(&self, py: Python<'py>, channel: &str) -> PyResult<Option<Bound<'py, PyDict>>> {
        let ch = match channel {
            "T" | "t" => Channel::T,
            "R" | "r" => Channel::R,
            other => return Err(PyValueError::new_err(format!("channel must be 'T' or 'R', got {other:?}"))),
        };
        let Some(p) = find_narrow_feature(&self.inner, ch) else {
            return Ok(None);
        };
        let d = PyDict::new(py);
        d.set_item("center_omega", p.center_omega)?;
        d.set_item("height", p.height)?;
        d.set_item("fwhm", p.fwhm)?;
        d.set_item("kind", kind_str(p.kind))?;
        d.set_item("baseline", p.baseline)?;
        Ok(Some(d))
    }

    fn to_csv(&self) -> String {
        pcraman::output::spectrum_csv(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Run configuration; `Config()` is the canonical sodium cavity.
#[pyclass(name = "Config", module = "pcraman", skip_from_py_object)]
#[derive(Clone)]
struct PyConfig {
    inner: RunConfig,
}

#[pymethods]
impl PyConfig {
    #[new]
    fn new() -> Self {
        PyConfig {
            inner: RunConfig::default(),
        }
    }

    #[staticmethod]
    fn load(path: std::path::PathBuf) -> PyResult<Self> {
        RunConfig::load(&path).map(|inner| PyConfig { inner }).map_err(py_err)
    }

    #[staticmethod]
    fn from_toml(text: &str) -> PyResult<Self> {
        RunConfig::from_toml_str(text, "<string>")
            .map(|inner| PyConfig { inner })
            .map_err(py_err)
    }

    #[getter]
    fn gamma10(&self) -> f64 {
        self.inner.gamma10_rad_s
    }

    #[getter]
    fn pump_rabi_over_gamma10(&self) -> f64 {
        self.inner.pump_rabi_over_gamma10
    }

    #[setter]
    fn set_pump_rabi_over_gamma10(&mut self, v: f64) -> PyResult<()> {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(PyValueError::new_err("pump_rabi_over_gamma10 must be finite and >= 0"));
        }
        self.inner.pump_rabi_over_gamma10 = v;
        Ok(())
    }

    #[getter]
    fn defect_slices(&self) -> usize {
        self.inner.defect_slices
    }

    #[setter]
    fn set_defect_slices(&mut self, v: usize) -> PyResult<()> {
        if v == 0 {
            return Err(PyValueError::new_err("defect_slices must be >= 1"));
        }
        self.inner.defect_slices = v;
        Ok(())
    }

    /// Uniform probe grid of `points` samples over ±`halfspan_over_gamma10`.
    fn set_grid(&mut self, halfspan_over_gamma10: f64, points: usize) {
        self.inner.grid = pcraman::spectrum::GridSpec::uniform(halfspan_over_gamma10 * self.inner.gamma10_rad_s, points);
    }

    fn digest(&self) -> String {
        self.inner.digest()
    }

    fn spectrum(&self, py: Python<'_>) -> PyResult<PySpectrum> {
        let cfg = self.inner.clone();
        py.detach(move || cfg.run_spectrum())
            .map(|inner| PySpectrum { inner })
            .map_err(py_err)
    }

    /// Rabi scan on the configured grid: dict of lists.
    fn scan<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let cfg = self.inner.clone();
        let s = py
            .detach(move || scan_rabi(&cfg, &cfg.scan.g1_grid(cfg.gamma10_rad_s)))
            .map_err(py_err)?;
        let d = PyDict::new(py);
        let g10 = self.inner.gamma10_rad_s;
        d.set_item("g1_over_gamma10", s.g1_values.iter().map(|g| g / g10).collect::<Vec<_>>())?;
        d.set_item("t_max", s.t_max.clone())?;
        d.set_item("r_max", s.r_max.clone())?;
        d.set_item("t_kind", s.t_kind.iter().map(|k| k.map(kind_str)).collect::<Vec<_>>())?;
        d.set_item("truncated_at_over_gamma10", s.truncated_at.map(|g| g / g10))?;
        Ok(d)
    }

    /// Fabry-Perot reduction at the current pump level.
    fn cavity_fpc<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let c = &self.inner;
        let stack = c.stack().map_err(py_err)?;
        let atom = c.atom().map_err(py_err)?;
        let m = CavityFpc::from_cavity(&stack, &atom, &c.pump(), c.omega0()).map_err(py_err)?;
        let lw = fpc::fpc_linewidth(&m.resonant_params().map_err(py_err)?).map_err(py_err)?;
        let d = PyDict::new(py);
        d.set_item("t_m", m.t_m)?;
        d.set_item("r_m", m.r_m)?;
        d.set_item("alpha_d", m.alpha_d)?;
        d.set_item("eta", m.eta)?;
        d.set_item("overlap_f", m.overlap_f)?;
        d.set_item("threshold_ratio", m.threshold_ratio())?;
        d.set_item("linewidth_rad_s", lw.narrowed)?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!(
            "Config(periods={}, defect_slices={}, pump_rabi_over_gamma10={})",
            self.inner.periods, self.inner.defect_slices, self.inner.pump_rabi_over_gamma10
        )
    }
}

fn params(t_m: f64, r_m: f64, alpha_d: f64, phi: f64, eta: f64, d: f64) -> FpcParams {
    FpcParams {
        t_m,
        r_m,
        alpha_d,
        phi,
        eta,
        d,
    }
}

/// Analytic Fabry-Perot transmittance.
#[pyfunction]
#[pyo3(signature = (t_m, r_m, alpha_d, phi))]
fn fpc_transmittance(t_m: f64, r_m: f64, alpha_d: f64, phi: f64) -> PyResult<f64> {
    fpc::fpc_transmittance(&params(t_m, r_m, alpha_d, phi, 0.0, 1.0)).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (t_m, r_m, alpha_d, phi))]
fn fpc_reflectance(t_m: f64, r_m: f64, alpha_d: f64, phi: f64) -> PyResult<f64> {
    fpc::fpc_reflectance(&params(t_m, r_m, alpha_d, phi, 0.0, 1.0)).map_err(py_err)
}

/// (narrowed, empty) linewidths in rad/s.
#[pyfunction]
#[pyo3(signature = (t_m, r_m, alpha_d, eta, d))]
fn fpc_linewidth(t_m: f64, r_m: f64, alpha_d: f64, eta: f64, d: f64) -> PyResult<(f64, f64)> {
    let w = fpc::fpc_linewidth(&params(t_m, r_m, alpha_d, 0.0, eta, d)).map_err(py_err)?;
    Ok((w.narrowed, w.empty))
}

#[pyfunction]
fn overlap_integral(k1: f64, k2: f64, d: f64) -> PyResult<f64> {
    fpc::overlap_integral(k1, k2, d).map_err(py_err)
}

/// (T_M, R_M) of the quarter-wave mirror (HL)^M H at its design wavelength.
#[pyfunction]
#[pyo3(signature = (n_high, n_low, periods, wavelength))]
fn mirror_coefficients(n_high: f64, n_low: f64, periods: usize, wavelength: f64) -> PyResult<(f64, f64)> {
    let stack = build_canonical_stack(ComplexIndex::real(n_high), ComplexIndex::real(n_low), periods, wavelength, 1)
        .map_err(py_err)?;
    tmm::mirror_coefficients(&stack, Frequency::from_wavelength(wavelength)).map_err(py_err)
}

/// (T, R) of a single slab of complex index `n` in vacuum; gain is `n.imag < 0`.
#[pyfunction]
fn slab(n: num_complex_like::C, thickness: f64, wavelength: f64) -> PyResult<(f64, f64)> {
    let layer = Layer::new(LayerKind::Custom, thickness, ComplexIndex::new(n.re, n.im)).map_err(py_err)?;
    let stack = LayerStack::new(vec![layer], ComplexIndex::VACUUM).map_err(py_err)?;
    tmm::transmittance_reflectance(&stack, Frequency::from_wavelength(wavelength)).map_err(py_err)
}

mod num_complex_like {
    use pyo3::prelude::*;
    use pyo3::types::PyComplex;

    /// Accepts a Python complex or a real number.
    pub struct C {
        pub re: f64,
        pub im: f64,
    }

    impl<'a, 'py> FromPyObject<'a, 'py> for C {
        type Error = PyErr;

        fn extract(ob: Borrowed<'a, 'py, PyAny>) -> PyResult<Self> {
            if let Ok(c) = ob.cast::<PyComplex>() {
                return Ok(C {
                    re: c.real(),
                    im: c.imag(),
                });
            }
            Ok(C {
                re: ob.extract::<f64>()?,
                im: 0.0,
            })
        }
    }
}

/// Oracle suite: list of (name, passed, detail).
#[pyfunction]
fn validate(py: Python<'_>) -> Vec<(String, bool, String)> {
    py.detach(pcraman::validate::run_suite)
        .into_iter()
        .map(|o| (o.name.to_string(), o.passed, o.detail))
        .collect()
}

#[pymodule(name = "pcraman")]
fn pcraman_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConfig>()?;
    m.add_class::<PySpectrum>()?;
    m.add_function(wrap_pyfunction!(fpc_transmittance, m)?)?;
    m.add_function(wrap_pyfunction!(fpc_reflectance, m)?)?;
    m.add_function(wrap_pyfunction!(fpc_linewidth, m)?)?;
    m.add_function(wrap_pyfunction!(overlap_integral, m)?)?;
    m.add_function(wrap_pyfunction!(mirror_coefficients, m)?)?;
    m.add_function(wrap_pyfunction!(slab, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
