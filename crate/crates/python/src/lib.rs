//! Python bindings for the qfi-detect toolkit.
//!
//! Matrices cross the boundary as lists of lists of Python complex numbers
//! (row-major); rotations as lists of lists of floats. Build the extension
//! with `cargo build --release -p qfi-detect-py` and rename/copy the
//! produced `libqfi_detect_py.so` to `qfi_detect_py.so` somewhere on
//! `sys.path` — `python/smoke_test.py` does exactly that.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use qfi_detect::criterion::{self, Mode};
use qfi_detect::numerics::{CMatrix, CVector, RMatrix};
use qfi_detect::observables::{self, SicSign};
use qfi_detect::qfi::{self, Observable};
use qfi_detect::states::{self, StateFamily};

fn err(e: qfi_detect::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn cmatrix_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows must be nonempty and equal-length"));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn cmatrix_to_rows(m: &CMatrix) -> Vec<Vec<Complex64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn rmatrix_to_rows(m: &RMatrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

fn rmatrix_from_rows(rows: Vec<Vec<f64>>) -> PyResult<RMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 || rows.iter().any(|r| r.len() != ncols) {
        return Err(PyValueError::new_err("matrix rows must be nonempty and equal-length"));
    }
    Ok(RMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn observable_from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<Observable> {
    Observable::new(cmatrix_from_rows(rows)?).map_err(err)
}

fn family_from_name(name: &str, local_dim: usize) -> PyResult<StateFamily> {
    match name {
        "isotropic" => Ok(StateFamily::Isotropic { local_dim }),
        "werner" => Ok(StateFamily::Werner { local_dim }),
        other => Err(PyValueError::new_err(format!(
            "unknown family '{other}' (expected 'isotropic' or 'werner')"
        ))),
    }
}

fn mode_from_name(name: &str) -> PyResult<Mode> {
    match name {
        "unopt" | "unoptimized" => Ok(Mode::Unoptimized),
        "opt" | "optimized" => Ok(Mode::Optimized),
        other => Err(PyValueError::new_err(format!(
            "unknown mode '{other}' (expected 'unopt' or 'opt')"
        ))),
    }
}

fn sign_from_name(name: &str) -> PyResult<SicSign> {
    match name {
        "minus" => Ok(SicSign::Minus),
        "plus" => Ok(SicSign::Plus),
        other => Err(PyValueError::new_err(format!(
            "unknown sign '{other}' (expected 'minus' or 'plus')"
        ))),
    }
}

/// A positive-semidefinite, unit-trace state with a cached spectral
/// decomposition.
#[pyclass(name = "DensityMatrix", frozen)]
struct PyDensityMatrix {
    inner: qfi_detect::DensityMatrix,
}

#[pymethods]
impl PyDensityMatrix {
    #[new]
    fn new(matrix: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let inner = qfi_detect::DensityMatrix::new(cmatrix_from_rows(matrix)?).map_err(err)?;
        Ok(Self { inner })
    }

    /// Rank-one state |psi><psi| from a unit vector of amplitudes.
    #[staticmethod]
    fn from_pure(amplitudes: Vec<Complex64>) -> PyResult<Self> {
        let psi = CVector::from_vec(amplitudes);
        Ok(Self { inner: qfi_detect::DensityMatrix::from_pure(&psi).map_err(err)? })
    }

    /// Isotropic state on a d x d system.
    #[staticmethod]
    fn isotropic(d: usize, eta: f64) -> PyResult<Self> {
        Ok(Self { inner: states::isotropic(d, eta).map_err(err)? })
    }

    /// Werner state on a d x d system.
    #[staticmethod]
    fn werner(d: usize, eta: f64) -> PyResult<Self> {
        Ok(Self { inner: states::werner(d, eta).map_err(err)? })
    }

    /// Seeded random state of the given rank.
    #[staticmethod]
    fn random(d: usize, rank: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: states::random_density(d, rank, seed).map_err(err)? })
    }

    /// Seeded random separable state: a convex mixture of `terms` product
    /// states.
    #[staticmethod]
    fn random_separable(dim_a: usize, dim_b: usize, terms: usize, seed: u64) -> PyResult<Self> {
        Ok(Self { inner: states::random_separable(dim_a, dim_b, terms, seed).map_err(err)? })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        cmatrix_to_rows(self.inner.matrix())
    }

    /// Eigenvalues in ascending order.
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues().to_vec()
    }

    fn purity(&self) -> f64 {
        self.inner.purity()
    }

    fn __repr__(&self) -> String {
        format!("DensityMatrix(dim={}, purity={:.6})", self.inner.dim(), self.inner.purity())
    }
}

/// An ordered set of Hermitian observables tagged with its certified kind
/// and total-QFI bound.
#[pyclass(name = "ObservableSet", frozen)]
struct PyObservableSet {
    inner: qfi_detect::ObservableSet,
}

#[pymethods]
impl PyObservableSet {
    /// Local orthonormal observables: identity/sqrt(d) plus the generalized
    /// Gell-Mann matrices over sqrt(2).
    #[staticmethod]
    fn loo(d: usize) -> PyResult<Self> {
        Ok(Self { inner: observables::loo_basis(d).map_err(err)? })
    }

    /// Built-in SIC-POVM (d = 2 or 3).
    #[staticmethod]
    fn sic(d: usize) -> PyResult<Self> {
        Ok(Self { inner: observables::sic_povm(d).map_err(err)? })
    }

    /// SIC-POVM from the Weyl-Heisenberg orbit of a fiducial vector.
    #[staticmethod]
    fn sic_from_fiducial(d: usize, fiducial: Vec<Complex64>) -> PyResult<Self> {
        let f = CVector::from_vec(fiducial);
        Ok(Self { inner: observables::sic_from_fiducial(d, &f).map_err(err)? })
    }

    /// Wrap arbitrary Hermitian matrices, optionally with a known
    /// total-QFI bound.
    #[staticmethod]
    #[pyo3(signature = (dim, matrices, bound_s=None))]
    fn generic(dim: usize, matrices: Vec<Vec<Vec<Complex64>>>, bound_s: Option<f64>) -> PyResult<Self> {
        let members: PyResult<Vec<Observable>> =
            matrices.into_iter().map(observable_from_rows).collect();
        Ok(Self {
            inner: qfi_detect::ObservableSet::generic(dim, members?, bound_s).map_err(err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    /// "loo", "sic" or "generic".
    fn kind(&self) -> &'static str {
        self.inner.kind().as_str()
    }

    fn bound_s(&self) -> Option<f64> {
        self.inner.bound_s()
    }

    fn members(&self) -> Vec<Vec<Vec<Complex64>>> {
        self.inner.members().iter().map(|o| cmatrix_to_rows(o.matrix())).collect()
    }

    fn member(&self, mu: usize) -> PyResult<Vec<Vec<Complex64>>> {
        if mu >= self.inner.len() {
            return Err(PyValueError::new_err(format!("member index {mu} out of range")));
        }
        Ok(cmatrix_to_rows(self.inner.member(mu).matrix()))
    }

    /// Turn a certified SIC into a LOO (sign "minus" or "plus").
    #[pyo3(signature = (sign="minus"))]
    fn to_loo(&self, sign: &str) -> PyResult<Self> {
        Ok(Self { inner: observables::sic_to_loo(&self.inner, sign_from_name(sign)?).map_err(err)? })
    }

    /// Mix the set along its orbit with an orthogonal rotation.
    fn rotate(&self, rotation: &PyRotation) -> PyResult<Self> {
        Ok(Self { inner: observables::rotate(&self.inner, &rotation.inner).map_err(err)? })
    }

    fn __repr__(&self) -> String {
        format!(
            "ObservableSet(kind={}, dim={}, members={})",
            self.inner.kind().as_str(),
            self.inner.dim(),
            self.inner.len()
        )
    }
}

/// A real orthogonal matrix mixing an observable set along its orbit.
#[pyclass(name = "OrthogonalRotation", frozen)]
struct PyRotation {
    inner: qfi_detect::OrthogonalRotation,
}

#[pymethods]
impl PyRotation {
    #[new]
    fn new(matrix: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Self { inner: qfi_detect::OrthogonalRotation::new(rmatrix_from_rows(matrix)?).map_err(err)? })
    }

    #[staticmethod]
    fn identity(size: usize) -> Self {
        Self { inner: qfi_detect::OrthogonalRotation::identity(size) }
    }

    /// Haar-distributed random orthogonal matrix, deterministic per seed.
    #[staticmethod]
    fn random(size: usize, seed: u64) -> Self {
        Self { inner: observables::random_orthogonal(size, seed) }
    }

    fn size(&self) -> usize {
        self.inner.size()
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        rmatrix_to_rows(self.inner.matrix())
    }

    fn __repr__(&self) -> String {
        format!("OrthogonalRotation(size={})", self.inner.size())
    }
}

/// Per-state criterion evaluation.
#[pyclass(name = "CriterionReport", frozen)]
struct PyCriterionReport {
    #[pyo3(get)]
    unopt_total: f64,
    #[pyo3(get)]
    opt_total: f64,
    #[pyo3(get)]
    bound: f64,
    #[pyo3(get)]
    xi_trace_norm: f64,
    #[pyo3(get)]
    unopt_violated: bool,
    #[pyo3(get)]
    opt_violated: bool,
    rotation_a: qfi_detect::OrthogonalRotation,
    rotation_b: qfi_detect::OrthogonalRotation,
}

#[pymethods]
impl PyCriterionReport {
    /// Maximizing rotation for side A (transpose of the xi SVD's U factor).
    fn rotation_a(&self) -> PyRotation {
        PyRotation { inner: self.rotation_a.clone() }
    }

    /// Maximizing rotation for side B (transpose of the xi SVD's V factor).
    fn rotation_b(&self) -> PyRotation {
        PyRotation { inner: self.rotation_b.clone() }
    }

    fn __repr__(&self) -> String {
        format!(
            "CriterionReport(unopt_total={:.6}, opt_total={:.6}, bound={:.6}, \
             unopt_violated={}, opt_violated={})",
            self.unopt_total, self.opt_total, self.bound, self.unopt_violated, self.opt_violated
        )
    }
}

/// Quantum Fisher information of a state/observable pair.
#[pyfunction(name = "qfi")]
fn qfi_py(rho: &PyDensityMatrix, observable: Vec<Vec<Complex64>>) -> PyResult<f64> {
    qfi::qfi(&rho.inner, &observable_from_rows(observable)?).map_err(err)
}

/// Symmetric logarithmic derivative, returned as a matrix.
#[pyfunction(name = "sld")]
fn sld_py(rho: &PyDensityMatrix, observable: Vec<Vec<Complex64>>) -> PyResult<Vec<Vec<Complex64>>> {
    let l = qfi::sld(&rho.inner, &observable_from_rows(observable)?).map_err(err)?;
    Ok(cmatrix_to_rows(l.matrix()))
}

/// Variance Tr[rho A^2] - Tr[rho A]^2.
#[pyfunction(name = "variance")]
fn variance_py(rho: &PyDensityMatrix, observable: Vec<Vec<Complex64>>) -> PyResult<f64> {
    qfi::variance(&rho.inner, &observable_from_rows(observable)?).map_err(err)
}

/// Total QFI over an observable set.
#[pyfunction(name = "total_qfi")]
fn total_qfi_py(rho: &PyDensityMatrix, obs: &PyObservableSet) -> PyResult<f64> {
    qfi::total_qfi(&rho.inner, &obs.inner).map_err(err)
}

/// Cramer-Rao bound 1/F for a single observable (inf when F = 0).
#[pyfunction(name = "precision_bound_single")]
fn precision_bound_single_py(
    rho: &PyDensityMatrix,
    observable: Vec<Vec<Complex64>>,
) -> PyResult<f64> {
    qfi::precision_bound_single(&rho.inner, &observable_from_rows(observable)?).map_err(err)
}

/// Cramer-Rao bound 1/(m F_total) for an observable set (inf when zero).
#[pyfunction(name = "precision_bound_set")]
fn precision_bound_set_py(rho: &PyDensityMatrix, obs: &PyObservableSet) -> PyResult<f64> {
    qfi::precision_bound_set(&rho.inner, &obs.inner).map_err(err)
}

/// Bipartite decomposition (f_a, f_b, xi) of the joint total QFI.
#[pyfunction(name = "xi_decomposition")]
fn xi_decomposition_py(
    rho: &PyDensityMatrix,
    obs_a: &PyObservableSet,
    obs_b: &PyObservableSet,
) -> PyResult<(f64, f64, Vec<Vec<f64>>)> {
    let d = criterion::xi_decomposition(&rho.inner, &obs_a.inner, &obs_b.inner).map_err(err)?;
    Ok((d.f_a, d.f_b, rmatrix_to_rows(&d.xi)))
}

/// Joint total QFI sum_mu F(rho, A_mu (x) I + I (x) B_mu), direct route.
#[pyfunction(name = "unoptimized_total")]
fn unoptimized_total_py(
    rho: &PyDensityMatrix,
    obs_a: &PyObservableSet,
    obs_b: &PyObservableSet,
) -> PyResult<f64> {
    criterion::unoptimized_total(&rho.inner, &obs_a.inner, &obs_b.inner).map_err(err)
}

/// Orbit maximum f_a + f_b + 2 ||xi||_tr with its maximizing rotations.
#[pyfunction(name = "optimized_total")]
fn optimized_total_py(
    rho: &PyDensityMatrix,
    obs_a: &PyObservableSet,
    obs_b: &PyObservableSet,
) -> PyResult<(f64, PyRotation, PyRotation)> {
    let (value, rot_a, rot_b) =
        criterion::optimized_total(&rho.inner, &obs_a.inner, &obs_b.inner).map_err(err)?;
    Ok((value, PyRotation { inner: rot_a }, PyRotation { inner: rot_b }))
}

/// State-independent separability bound s(A) + s(B).
#[pyfunction(name = "separability_bound")]
fn separability_bound_py(obs_a: &PyObservableSet, obs_b: &PyObservableSet) -> PyResult<f64> {
    criterion::separability_bound(&obs_a.inner, &obs_b.inner).map_err(err)
}

/// Evaluate both criterion variants on one state.
#[pyfunction(name = "evaluate")]
fn evaluate_py(
    rho: &PyDensityMatrix,
    obs_a: &PyObservableSet,
    obs_b: &PyObservableSet,
) -> PyResult<PyCriterionReport> {
    let r = criterion::evaluate(&rho.inner, &obs_a.inner, &obs_b.inner).map_err(err)?;
    Ok(PyCriterionReport {
        unopt_total: r.unopt_total,
        opt_total: r.opt_total,
        bound: r.bound,
        xi_trace_norm: r.xi_trace_norm,
        unopt_violated: r.unopt_violated,
        opt_violated: r.opt_violated,
        rotation_a: r.rotation_a,
        rotation_b: r.rotation_b,
    })
}

/// Smallest eta in [0, 1] at which the criterion detects entanglement for
/// a family ("isotropic" or "werner"); None when nothing is detected.
/// Mode is "unopt" or "opt".
#[pyfunction(name = "threshold")]
fn threshold_py(
    family: &str,
    local_dim: usize,
    obs_a: &PyObservableSet,
    obs_b: &PyObservableSet,
    mode: &str,
) -> PyResult<Option<f64>> {
    criterion::threshold(
        family_from_name(family, local_dim)?,
        &obs_a.inner,
        &obs_b.inner,
        mode_from_name(mode)?,
    )
    .map_err(err)
}

#[pymodule]
fn qfi_detect_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyDensityMatrix>()?;
    m.add_class::<PyObservableSet>()?;
    m.add_class::<PyRotation>()?;
    m.add_class::<PyCriterionReport>()?;
    m.add_function(wrap_pyfunction!(qfi_py, m)?)?;
    m.add_function(wrap_pyfunction!(sld_py, m)?)?;
    m.add_function(wrap_pyfunction!(variance_py, m)?)?;
    m.add_function(wrap_pyfunction!(total_qfi_py, m)?)?;
    m.add_function(wrap_pyfunction!(precision_bound_single_py, m)?)?;
    m.add_function(wrap_pyfunction!(precision_bound_set_py, m)?)?;
    m.add_function(wrap_pyfunction!(xi_decomposition_py, m)?)?;
    m.add_function(wrap_pyfunction!(unoptimized_total_py, m)?)?;
    m.add_function(wrap_pyfunction!(optimized_total_py, m)?)?;
    m.add_function(wrap_pyfunction!(separability_bound_py, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_py, m)?)?;
    m.add_function(wrap_pyfunction!(threshold_py, m)?)?;
    Ok(())
}
