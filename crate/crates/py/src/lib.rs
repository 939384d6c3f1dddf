//! Python bindings. Operators and layouts are wrapped as classes; reports
//! come back as plain dicts and lists. Library errors raise `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use subsyscode as sc;
use subsyscode::thermal::order_parameter;

fn err(e: sc::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(
    name = "PauliOperator",
    module = "subsyscode_py",
    eq,
    frozen,
    from_py_object
)]
#[derive(Clone, PartialEq)]
pub struct PyPauli(pub sc::PauliOperator);

#[pymethods]
impl PyPauli {
    /// Parses a token string such as `"-i XZY"`.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyPauli).map_err(err)
    }

    #[staticmethod]
    fn identity(num_sites: usize) -> Self {
        PyPauli(sc::PauliOperator::identity(num_sites))
    }

    #[getter]
    fn num_sites(&self) -> usize {
        self.0.num_sites()
    }

    /// Exponent of `i` in the `X^a Z^b` representation.
    #[getter]
    fn phase_exp(&self) -> u8 {
        self.0.phase_exp()
    }

    fn weight(&self) -> usize {
        self.0.weight()
    }

    fn support(&self) -> Vec<usize> {
        self.0.support().collect()
    }

    fn commutes_with(&self, other: &PyPauli) -> PyResult<bool> {
        self.0.commutes_with(&other.0).map_err(err)
    }

    fn __mul__(&self, other: &PyPauli) -> PyResult<PyPauli> {
        self.0.try_mul(&other.0).map(PyPauli).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PauliOperator('{}')", self.0)
    }
}

#[pyclass(
    name = "CodeLayout",
    module = "subsyscode_py",
    eq,
    frozen,
    from_py_object
)]
#[derive(Clone, PartialEq)]
pub struct PyLayout(pub sc::CodeLayout);

#[derive(IntoPyObject)]
struct Logicals {
    x: PyPauli,
    y: PyPauli,
    z: PyPauli,
}

#[derive(IntoPyObject)]
struct Decoded {
    syndrome: (String, String),
    inferred_e: String,
    inferred_f: String,
    correction: PyPauli,
    residual: String,
}

#[pymethods]
impl PyLayout {
    #[new]
    fn new(dim: usize, n: usize) -> PyResult<Self> {
        sc::build_code(dim, n).map(PyLayout).map_err(err)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dimension().as_usize()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn num_sites(&self) -> usize {
        self.0.num_sites()
    }

    /// Flat index of zero-based coordinates.
    fn site_index(&self, coords: Vec<usize>) -> PyResult<usize> {
        self.0.site_index(&coords).map_err(err)
    }

    fn coords(&self, site: usize) -> Vec<usize> {
        self.0.coords(site)
    }

    fn gauge_generators(&self) -> Vec<PyPauli> {
        self.0.gauge_generators().into_iter().map(PyPauli).collect()
    }

    fn stabilizer_generators(&self) -> Vec<PyPauli> {
        self.0
            .stabilizer_generators()
            .into_iter()
            .map(PyPauli)
            .collect()
    }

    /// Dict with keys `x`, `y`, `z`.
    fn logical_operators(&self) -> Logicals {
        let l = self.0.logical_operators();
        Logicals {
            x: PyPauli(l.x),
            y: PyPauli(l.y),
            z: PyPauli(l.z),
        }
    }

    /// `(e, f)` parity strings.
    fn error_strings(&self, op: &PyPauli) -> PyResult<(String, String)> {
        let s = self.0.error_strings(&op.0).map_err(err)?;
        Ok((s.e.to_string(), s.f.to_string()))
    }

    /// `(sx, sz)` syndrome bits.
    fn measure_syndrome(&self, op: &PyPauli) -> PyResult<(String, String)> {
        let s = self.0.measure_syndrome(&op.0).map_err(err)?;
        Ok((s.sx.to_string(), s.sz.to_string()))
    }

    /// One of `Gauge`, `LogicalX`, `LogicalY`, `LogicalZ`, `Detectable`.
    fn classify(&self, op: &PyPauli) -> PyResult<String> {
        Ok(self.0.classify(&op.0).map_err(err)?.name().to_string())
    }

    fn decode(&self, error: &PyPauli) -> PyResult<Decoded> {
        let out = sc::decode(&self.0, &error.0).map_err(err)?;
        let residual = sc::adjudicate(&self.0, &error.0, &out).map_err(err)?;
        Ok(Decoded {
            syndrome: (out.syndrome.sx.to_string(), out.syndrome.sz.to_string()),
            inferred_e: out.inferred_e.to_string(),
            inferred_f: out.inferred_f.to_string(),
            correction: PyPauli(out.correction),
            residual: residual.name().to_string(),
        })
    }

    /// Closed-form logical failure probability for single-type flips at rate `p`.
    fn analytic_failure_prob(&self, p: f64) -> PyResult<f64> {
        sc::analytic_failure_prob(&self.0, p).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("CodeLayout(dim={}, n={})", self.dim(), self.0.n())
    }
}

#[derive(IntoPyObject)]
struct Trials {
    trials: u64,
    gauge: u64,
    logical_x: u64,
    logical_y: u64,
    logical_z: u64,
    failure_rate: f64,
    ci_low: f64,
    ci_high: f64,
    seed: u64,
}

/// Monte-Carlo failure rate. `noise` is `z`, `x`, `xz` or `depolarizing`.
#[pyfunction]
fn run_trials(
    py: Python<'_>,
    layout: &PyLayout,
    noise: &str,
    p: f64,
    trials: u64,
    seed: u64,
) -> PyResult<Trials> {
    let kind: sc::NoiseKind = noise.parse().map_err(err)?;
    let model = kind.model(p).map_err(err)?;
    let layout = layout.0;
    let s = py
        .detach(|| sc::run_trials(&layout, &model, trials, seed))
        .map_err(err)?;
    Ok(Trials {
        trials: s.trials,
        gauge: s.counts.gauge,
        logical_x: s.counts.logical_x,
        logical_y: s.counts.logical_y,
        logical_z: s.counts.logical_z,
        failure_rate: s.failure_rate,
        ci_low: s.ci_low,
        ci_high: s.ci_high,
        seed: s.seed,
    })
}

#[derive(IntoPyObject)]
struct Spectrum {
    n: usize,
    dimension: usize,
    levels: Vec<(f64, usize)>,
    ground_energy: f64,
    ground_multiplicity: usize,
    ground_sector: (String, String),
    all_multiplicities_even: bool,
    ground_in_trivial_sector: bool,
}

/// Sector-resolved exact spectrum of the 2D bond Hamiltonian.
#[pyfunction]
#[pyo3(signature = (n, lam = 1.0))]
fn diagonalize(py: Python<'_>, n: usize, lam: f64) -> PyResult<Spectrum> {
    let layout = sc::build_code(2, n).map_err(err)?;
    let r = py
        .detach(|| sc::diagonalize_small(&sc::build_hamiltonian(&layout, lam)))
        .map_err(err)?;
    Ok(Spectrum {
        n: r.n,
        dimension: r.dimension,
        levels: r
            .eigenvalues
            .iter()
            .map(|l| (l.value, l.multiplicity))
            .collect(),
        ground_energy: r.ground_energy,
        ground_multiplicity: r.ground_multiplicity,
        ground_sector: (
            r.ground_sector.sx.to_string(),
            r.ground_sector.sz.to_string(),
        ),
        all_multiplicities_even: r.all_multiplicities_even(),
        ground_in_trivial_sector: r.ground_in_trivial_sector,
    })
}

/// Mean-field energy cost of `error` on the 3D code.
#[pyfunction]
#[pyo3(signature = (layout, error, lam = 1.0, c_xx = 1.0, c_xy = 1.0, c_zy = 1.0, c_zz = 1.0))]
fn mean_field_delta_e(
    layout: &PyLayout,
    error: &PyPauli,
    lam: f64,
    c_xx: f64,
    c_xy: f64,
    c_zy: f64,
    c_zz: f64,
) -> PyResult<f64> {
    let params = sc::MeanFieldParams::new(c_xx, c_xy, c_zy, c_zz).map_err(err)?;
    let spec = sc::build_hamiltonian(&layout.0, lam);
    sc::mean_field_delta_e(&spec, &error.0, &params).map_err(err)
}

/// Magnetization per site after each sweep, starting all up.
#[pyfunction]
fn simulate_ising_memory(
    py: Python<'_>,
    dim: usize,
    side: usize,
    coupling: f64,
    temperature: f64,
    sweeps: usize,
    seed: u64,
) -> PyResult<Vec<f64>> {
    py.detach(|| sc::simulate_ising_memory(dim, side, coupling, temperature, sweeps, seed))
        .map_err(err)
}

fn sector(name: &str) -> PyResult<sc::ErrorSector> {
    match name {
        "x" | "X" => Ok(sc::ErrorSector::X),
        "z" | "Z" => Ok(sc::ErrorSector::Z),
        other => Err(PyValueError::new_err(format!(
            "unknown sector {other:?}, expected x or z"
        ))),
    }
}

/// `(mean, stderr)` of the decoded logical value for one temperature.
#[pyfunction]
#[pyo3(signature = (n, temperature, encoded, seed, lam = 1.0, c = 1.0, equilibration = 100, samples = 1000, sample_every = 5, sector_name = "x"))]
#[allow(clippy::too_many_arguments)]
fn order_parameter_at(
    py: Python<'_>,
    n: usize,
    temperature: f64,
    encoded: i8,
    seed: u64,
    lam: f64,
    c: f64,
    equilibration: usize,
    samples: usize,
    sample_every: usize,
    sector_name: &str,
) -> PyResult<(f64, f64)> {
    let run = sc::MeanFieldRun {
        n,
        params: sc::MeanFieldParams::uniform(c).map_err(err)?,
        lambda: lam,
        temperature,
        equilibration_sweeps: equilibration,
        samples,
        sample_every,
        seed,
        encoded,
        sector: sector(sector_name)?,
    };
    let out = py
        .detach(|| sc::simulate_meanfield_code(&run))
        .map_err(err)?;
    Ok(order_parameter(&out))
}

#[pymodule]
pub fn subsyscode_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPauli>()?;
    m.add_class::<PyLayout>()?;
    m.add_function(wrap_pyfunction!(run_trials, m)?)?;
    m.add_function(wrap_pyfunction!(diagonalize, m)?)?;
    m.add_function(wrap_pyfunction!(mean_field_delta_e, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_ising_memory, m)?)?;
    m.add_function(wrap_pyfunction!(order_parameter_at, m)?)?;
    Ok(())
}
