//! Python bindings for the qcondense library: dispersions, inverse
//! temperature profiles, q-statistics, two-point kernels and their
//! local-equilibrium residuals, finite-volume solvers, observables, and
//! the finite-dimensional matrix model.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qcondense::kernel;
use qcondense::mu_solver;
use qcondense::observables;
use qcondense::statistics::{self, Convention, DensityOutcome, MuBound};
use qcondense::temperature;
use qcondense::{
    CMatrix, DispersionRelation, InverseTempProfile, MatrixModel, QStatistics, SingularPart,
    TestFunction, TwoPointKernel,
};

fn err(e: qcondense::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_convention(name: &str) -> PyResult<Convention> {
    match name {
        "A" | "a" => Ok(Convention::A),
        "B" | "b" => Ok(Convention::B),
        other => Err(PyValueError::new_err(format!(
            "convention must be 'A' or 'B', got '{other}'"
        ))),
    }
}

fn density_outcome_dict(py: Python<'_>, out: DensityOutcome) -> PyResult<Py<PyDict>> {
    let d = PyDict::new(py);
    match out {
        DensityOutcome::Finite { value, error_bound } => {
            d.set_item("value", value)?;
            d.set_item("error_bound", error_bound)?;
            d.set_item("verdict", "finite")?;
        }
        DensityOutcome::Infinite { diagnostic } => {
            d.set_item("value", py.None())?;
            d.set_item("verdict", "infinite")?;
            d.set_item("diagnostic", diagnostic)?;
        }
    }
    Ok(d.into())
}

/// One-particle energy h(p).
#[pyclass(name = "Dispersion", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDispersion {
    inner: DispersionRelation,
}

#[pymethods]
impl PyDispersion {
    /// h(p) = |p|^s in dimension d (s >= 1).
    #[staticmethod]
    fn power(s: f64, d: usize) -> PyResult<Self> {
        Ok(Self {
            inner: DispersionRelation::power_law(s, d).map_err(err)?,
        })
    }

    /// h(p) = c sqrt(|p|^2 + m^2 c^2) - m c^2.
    #[staticmethod]
    fn relativistic(m: f64, c: f64, d: usize) -> PyResult<Self> {
        Ok(Self {
            inner: DispersionRelation::relativistic(m, c, d).map_err(err)?,
        })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d
    }

    fn evaluate(&self, p: Vec<f64>) -> PyResult<f64> {
        self.inner.evaluate(&p).map_err(err)
    }

    fn radial(&self, r: f64) -> PyResult<f64> {
        self.inner.radial(r).map_err(err)
    }
}

/// Local inverse temperature beta(x) with tilde_beta(x) = beta(x) x.
#[pyclass(name = "Profile", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyProfile {
    inner: InverseTempProfile,
}

#[pymethods]
impl PyProfile {
    #[staticmethod]
    fn constant(beta0: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InverseTempProfile::constant(beta0).map_err(err)?,
        })
    }

    #[staticmethod]
    fn power_log(alpha0: f64, alpha_inf: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InverseTempProfile::power_log(alpha0, alpha_inf).map_err(err)?,
        })
    }

    #[staticmethod]
    fn zero_at(x0: f64, a: f64, alpha_inf: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InverseTempProfile::zero_at(x0, a, alpha_inf).map_err(err)?,
        })
    }

    /// Profile from a Python callable x -> beta(x) with a declared finite
    /// zero set of tilde_beta (the library never root-finds it).
    #[staticmethod]
    fn custom(beta: Py<PyAny>, zero_set: Vec<f64>) -> Self {
        let f = move |x: f64| -> f64 {
            Python::attach(|py| {
                beta.call1(py, (x,))
                    .and_then(|v| v.extract::<f64>(py))
                    .unwrap_or(f64::NAN)
            })
        };
        Self {
            inner: InverseTempProfile::custom(f, zero_set),
        }
    }

    fn beta(&self, x: f64) -> PyResult<f64> {
        self.inner.beta(x).map_err(err)
    }

    fn tilde_beta(&self, x: f64) -> PyResult<f64> {
        self.inner.tilde_beta(x).map_err(err)
    }

    fn zero_set(&self) -> Vec<f64> {
        self.inner.zero_set()
    }

    /// Probes conditions (i)-(iii) against a power-law dispersion.
    fn check_admissibility(
        &self,
        py: Python<'_>,
        dispersion: &PyDispersion,
    ) -> PyResult<Py<PyDict>> {
        let rep = self
            .inner
            .check_admissibility(&dispersion.inner, dispersion.inner.d)
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("continuity_ok", rep.continuity_ok)?;
        d.set_item("inf_zero_ok", rep.inf_zero_ok)?;
        d.set_item("zero_set_finite", rep.zero_set_finite)?;
        d.set_item("tail_integrable", rep.tail_integrable)?;
        d.set_item("all_ok", rep.all_ok())?;
        d.set_item("diagnostics", rep.diagnostics)?;
        Ok(d.into())
    }
}

/// The triple (q, mu, convention).
#[pyclass(name = "Stats", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStats {
    inner: QStatistics,
}

#[pymethods]
impl PyStats {
    #[new]
    #[pyo3(signature = (q, mu, convention = "A"))]
    fn new(q: f64, mu: f64, convention: &str) -> PyResult<Self> {
        Ok(Self {
            inner: QStatistics::new(q, mu, parse_convention(convention)?).map_err(err)?,
        })
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q
    }

    #[getter]
    fn mu(&self) -> f64 {
        self.inner.mu
    }

    fn occupation(&self, profile: &PyProfile, eps: f64) -> PyResult<f64> {
        statistics::occupation(&self.inner, &profile.inner, eps).map_err(err)
    }

    fn gamma_mu(&self, profile: &PyProfile, eps: f64) -> PyResult<f64> {
        statistics::gamma_mu(&self.inner, &profile.inner, eps).map_err(err)
    }
}

/// Smooth, compactly supported test function on momentum space.
#[pyclass(name = "TestFn", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTestFn {
    inner: TestFunction,
}

#[pymethods]
impl PyTestFn {
    #[staticmethod]
    fn bump(center: Vec<f64>, radius: f64) -> PyResult<Self> {
        Ok(Self {
            inner: TestFunction::bump(center, radius).map_err(err)?,
        })
    }

    #[staticmethod]
    fn bump_times_poly(center: Vec<f64>, radius: f64, powers: Vec<u32>) -> PyResult<Self> {
        Ok(Self {
            inner: TestFunction::bump_times_poly(center, radius, powers).map_err(err)?,
        })
    }

    /// Spatial translation: multiplies by e^{i p . x}.
    fn translate(&self, x: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.clone().translate(x).map_err(err)?,
        })
    }

    /// Composition with the transpose of an orthogonal matrix (row-major).
    fn rotate(&self, rotation: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.clone().rotate(&rotation).map_err(err)?,
        })
    }

    fn eval(&self, p: Vec<f64>) -> PyResult<Complex64> {
        self.inner.eval(&p).map_err(err)
    }

    fn grad(&self, p: Vec<f64>) -> PyResult<Vec<Complex64>> {
        self.inner.grad(&p).map_err(err)
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }
}

/// Two-point kernel: optional occupation diagonal plus singular
/// condensate parts. Gradient axes are 0-based here.
#[pyclass(name = "Kernel")]
struct PyKernel {
    inner: TwoPointKernel,
}

#[pymethods]
impl PyKernel {
    #[new]
    #[pyo3(signature = (stats, profile, dispersion, diagonal = true))]
    fn new(
        stats: &PyStats,
        profile: &PyProfile,
        dispersion: &PyDispersion,
        diagonal: bool,
    ) -> Self {
        let inner = if diagonal {
            TwoPointKernel::diagonal(stats.inner, profile.inner.clone(), dispersion.inner.clone())
        } else {
            TwoPointKernel::singular_only(
                stats.inner,
                profile.inner.clone(),
                dispersion.inner.clone(),
            )
        };
        Self { inner }
    }

    fn add_point_mass(&mut self, weight: f64, at: Vec<f64>) {
        self.inner
            .singular
            .push(SingularPart::PointMass { weight, at });
    }

    fn add_sphere_average(&mut self, weight: f64, radius: f64) {
        self.inner
            .singular
            .push(SingularPart::SphereAverage { weight, radius });
    }

    fn add_surface_atoms(&mut self, atoms: Vec<(f64, Vec<f64>)>) {
        self.inner
            .singular
            .push(SingularPart::SurfaceAtoms { atoms });
    }

    fn add_gradient_point_mass(&mut self, weight: f64, axes: Vec<usize>) {
        self.inner
            .singular
            .push(SingularPart::GradientPointMass { weight, axes });
    }

    /// Admissibility of the singular supports and mu; (ok, violations).
    fn validate(&self) -> (bool, Vec<String>) {
        let rep = kernel::validate(&self.inner);
        (rep.ok, rep.violations)
    }

    /// omega(a^dagger(f) a(g)).
    fn pair(&self, f: &PyTestFn, g: &PyTestFn) -> PyResult<Complex64> {
        kernel::pair(&self.inner, &f.inner, &g.inner).map_err(err)
    }

    /// (residual, scale): residual of the local-equilibrium relation and
    /// the larger of its two sides.
    fn lep_residual(&self, f: &PyTestFn, g: &PyTestFn) -> PyResult<(Complex64, f64)> {
        let r = kernel::lep_residual(&self.inner, &f.inner, &g.inner).map_err(err)?;
        Ok((r.residual, r.scale))
    }

    fn positivity_probe(&self, f: &PyTestFn) -> PyResult<f64> {
        kernel::positivity_probe(&self.inner, &f.inner).map_err(err)
    }

    fn reality_check(&self, f: &PyTestFn, g: &PyTestFn) -> PyResult<f64> {
        kernel::reality_check(&self.inner, &f.inner, &g.inner).map_err(err)
    }

    #[pyo3(signature = (f, g, tol = 1e-9))]
    fn monotonicity_probe(&self, f: &PyTestFn, g: &PyTestFn, tol: f64) -> PyResult<bool> {
        kernel::monotonicity_probe(&self.inner, &f.inner, &g.inner, tol).map_err(err)
    }

    /// {bulk, bulk_verdict, condensate, total} at a position.
    fn local_density(&self, py: Python<'_>, x: Vec<f64>) -> PyResult<Py<PyDict>> {
        let rho = observables::local_density(&self.inner, &x).map_err(err)?;
        let d = PyDict::new(py);
        match &rho.bulk {
            observables::BulkVerdict::Finite { value, error_bound } => {
                d.set_item("bulk", *value)?;
                d.set_item("bulk_error_bound", *error_bound)?;
                d.set_item("bulk_verdict", "finite")?;
                d.set_item("total", value + rho.condensate)?;
            }
            observables::BulkVerdict::Infinite { diagnostic } => {
                d.set_item("bulk", py.None())?;
                d.set_item("bulk_verdict", "infinite")?;
                d.set_item("diagnostic", diagnostic)?;
                d.set_item("total", py.None())?;
            }
        }
        d.set_item("condensate", rho.condensate)?;
        Ok(d.into())
    }

    fn condensate_map(&self, eps: f64, grid: Vec<(f64, f64)>) -> PyResult<Vec<f64>> {
        observables::condensate_map(&self.inner, eps, &grid).map_err(err)
    }

    fn meniscus_profile(&self, grid: Vec<(f64, f64)>) -> PyResult<Vec<f64>> {
        observables::meniscus_profile(&self.inner, &grid).map_err(err)
    }

    #[pyo3(signature = (trials = 10, seed = 0))]
    fn rotation_invariance_deviation(&self, trials: usize, seed: u64) -> PyResult<f64> {
        observables::rotation_invariance_deviation(&self.inner, trials, seed).map_err(err)
    }

    /// (predicted, measured) density shift at the origin under spatial
    /// translation by y.
    fn translation_shift_law(&self, y: Vec<f64>) -> PyResult<(f64, f64)> {
        observables::translation_shift_law(&self.inner, &y).map_err(err)
    }
}

/// Dirichlet box with modes pi n / L, n in {1..cutoff}^d.
#[pyclass(name = "FiniteVolumeModel", frozen)]
struct PyFiniteVolume {
    inner: mu_solver::FiniteVolumeModel,
}

#[pymethods]
impl PyFiniteVolume {
    #[new]
    fn new(side: f64, d: usize, dispersion: &PyDispersion, cutoff: usize) -> PyResult<Self> {
        Ok(Self {
            inner: mu_solver::FiniteVolumeModel::new(side, d, dispersion.inner.clone(), cutoff)
                .map_err(err)?,
        })
    }

    #[staticmethod]
    #[pyo3(signature = (side, d, dispersion, profile, mu_hint = 1.0))]
    fn with_auto_cutoff(
        side: f64,
        d: usize,
        dispersion: &PyDispersion,
        profile: &PyProfile,
        mu_hint: f64,
    ) -> PyResult<Self> {
        Ok(Self {
            inner: mu_solver::FiniteVolumeModel::with_auto_cutoff(
                side,
                d,
                dispersion.inner.clone(),
                &profile.inner,
                mu_hint,
            )
            .map_err(err)?,
        })
    }

    fn spectrum(&self) -> Vec<(f64, f64)> {
        self.inner.spectrum().to_vec()
    }

    fn ground_energy(&self) -> f64 {
        self.inner.ground_energy()
    }

    fn finite_density(&self, profile: &PyProfile, mu: f64) -> PyResult<f64> {
        self.inner.finite_density(&profile.inner, mu).map_err(err)
    }

    fn solve_mu(&self, profile: &PyProfile, rho_target: f64) -> PyResult<f64> {
        self.inner.solve_mu(&profile.inner, rho_target).map_err(err)
    }

    fn condensate_estimate(&self, profile: &PyProfile, mu: f64, rho_target: f64) -> PyResult<f64> {
        self.inner
            .condensate_estimate(&profile.inner, mu, rho_target)
            .map_err(err)
    }
}

/// Matrix model for the finite-degrees-of-freedom identities.
#[pyclass(name = "MatrixModel", frozen)]
struct PyMatrixModel {
    inner: MatrixModel,
}

fn to_cmatrix(a: &[Vec<Complex64>]) -> PyResult<CMatrix> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(PyValueError::new_err("matrix must be square"));
    }
    let mut m = CMatrix::zeros(n);
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m.set(i, j, *v);
        }
    }
    Ok(m)
}

#[pymethods]
impl PyMatrixModel {
    #[new]
    fn new(eigenvalues: Vec<f64>, profile: &PyProfile) -> PyResult<Self> {
        Ok(Self {
            inner: MatrixModel::new(eigenvalues, profile.inner.clone()).map_err(err)?,
        })
    }

    fn state(&self, a: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
        self.inner.state(&to_cmatrix(&a)?).map_err(err)
    }

    fn leq_residual(
        &self,
        a: Vec<Vec<Complex64>>,
        i: usize,
        j: usize,
        t: f64,
    ) -> PyResult<Complex64> {
        self.inner
            .leq_residual(&to_cmatrix(&a)?, i, j, t)
            .map_err(err)
    }

    fn kms_residual(
        &self,
        a: Vec<Vec<Complex64>>,
        b: Vec<Vec<Complex64>>,
        t: f64,
    ) -> PyResult<Complex64> {
        self.inner
            .kms_residual(&to_cmatrix(&a)?, &to_cmatrix(&b)?, t)
            .map_err(err)
    }

    /// List of (frequency, mu_weight, nu_weight).
    fn bohr_measures(&self, a: Vec<Vec<Complex64>>) -> PyResult<Vec<(f64, f64, f64)>> {
        Ok(self
            .inner
            .bohr_measures(&to_cmatrix(&a)?)
            .map_err(err)?
            .into_iter()
            .map(|l| (l.frequency, l.mu_weight, l.nu_weight))
            .collect())
    }
}

#[pyfunction]
#[pyo3(signature = (q, profile, dispersion, rel_tol = 1e-10))]
fn critical_density(
    py: Python<'_>,
    q: f64,
    profile: &PyProfile,
    dispersion: &PyDispersion,
    rel_tol: f64,
) -> PyResult<Py<PyDict>> {
    let out =
        statistics::critical_density(q, &profile.inner, &dispersion.inner, rel_tol).map_err(err)?;
    density_outcome_dict(py, out)
}

#[pyfunction]
#[pyo3(signature = (stats, profile, dispersion, rel_tol = 1e-10))]
fn density(
    py: Python<'_>,
    stats: &PyStats,
    profile: &PyProfile,
    dispersion: &PyDispersion,
    rel_tol: f64,
) -> PyResult<Py<PyDict>> {
    let out = statistics::density(&stats.inner, &profile.inner, &dispersion.inner, rel_tol)
        .map_err(err)?;
    density_outcome_dict(py, out)
}

#[pyfunction]
#[pyo3(signature = (q, profile, convention = "A"))]
fn critical_mu(
    py: Python<'_>,
    q: f64,
    profile: &PyProfile,
    convention: &str,
) -> PyResult<Py<PyDict>> {
    let r =
        statistics::critical_mu(q, &profile.inner, parse_convention(convention)?).map_err(err)?;
    let d = PyDict::new(py);
    match r.bound {
        MuBound::Finite(v) => {
            d.set_item("value", v)?;
            d.set_item("unbounded", false)?;
        }
        MuBound::Unbounded => {
            d.set_item("value", py.None())?;
            d.set_item("unbounded", true)?;
        }
    }
    d.set_item("no_solution", r.no_solution)?;
    d.set_item("literature_criterion_no_solution", r.literature_criterion_no_solution)?;
    Ok(d.into())
}

#[pyfunction]
#[pyo3(signature = (profile, dispersion, rho_target, rel_tol = 1e-10))]
fn fermi_mu(
    profile: &PyProfile,
    dispersion: &PyDispersion,
    rho_target: f64,
    rel_tol: f64,
) -> PyResult<f64> {
    statistics::fermi_solve_mu(&profile.inner, &dispersion.inner, rho_target, rel_tol).map_err(err)
}

#[pyfunction]
fn sup_beta_gap(profile: &PyProfile, mu: f64) -> PyResult<f64> {
    statistics::sup_beta_gap(&profile.inner, mu).map_err(err)
}

#[pyfunction]
fn dimension_condition(
    py: Python<'_>,
    s: f64,
    d: usize,
    alpha0: f64,
    alpha_inf: f64,
) -> PyResult<Py<PyDict>> {
    let v = temperature::dimension_condition(s, d, alpha0, alpha_inf);
    let out = PyDict::new(py);
    out.set_item("converges_at_zero", v.converges_at_zero)?;
    out.set_item("converges_at_infinity", v.converges_at_infinity)?;
    out.set_item("condensation_possible", v.condensation_possible)?;
    Ok(out.into())
}

#[pyfunction]
#[pyo3(signature = (profile, dispersion, rho_target, sides))]
fn thermodynamic_sweep(
    py: Python<'_>,
    profile: &PyProfile,
    dispersion: &PyDispersion,
    rho_target: f64,
    sides: Vec<f64>,
) -> PyResult<Py<PyDict>> {
    let table =
        mu_solver::thermodynamic_sweep(&profile.inner, &dispersion.inner, rho_target, &sides)
            .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("rho_target", table.rho_target)?;
    d.set_item("rho_c_box", table.rho_c_box)?;
    let rows: Vec<(f64, f64, f64, f64)> = table
        .rows
        .iter()
        .map(|r| (r.side, r.mu, r.condensate_estimate, r.residual))
        .collect();
    d.set_item("rows", rows)?;
    Ok(d.into())
}

#[pyfunction]
#[pyo3(signature = (profile, dispersion, rel_tol = 1e-10))]
fn box_critical_density(
    py: Python<'_>,
    profile: &PyProfile,
    dispersion: &PyDispersion,
    rel_tol: f64,
) -> PyResult<Py<PyDict>> {
    let out =
        mu_solver::box_critical_density(&profile.inner, &dispersion.inner, rel_tol).map_err(err)?;
    density_outcome_dict(py, out)
}

#[pymodule]
fn qcondense_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDispersion>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyStats>()?;
    m.add_class::<PyTestFn>()?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyFiniteVolume>()?;
    m.add_class::<PyMatrixModel>()?;
    m.add_function(wrap_pyfunction!(critical_density, m)?)?;
    m.add_function(wrap_pyfunction!(density, m)?)?;
    m.add_function(wrap_pyfunction!(critical_mu, m)?)?;
    m.add_function(wrap_pyfunction!(fermi_mu, m)?)?;
    m.add_function(wrap_pyfunction!(sup_beta_gap, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_condition, m)?)?;
    m.add_function(wrap_pyfunction!(thermodynamic_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(box_critical_density, m)?)?;
    Ok(())
}
