//! Python bindings: `mlti.PairedTensor`, `mlti.DenseTensor` and
//! `mlti.MltiSystem`.
//!
//! Indices passed from Python are 0-based. Flat `data` lists use the same
//! interleaved, first-index-fastest layout as the system files.

use mlti_cli::{CliError, Encoding, ErrorKind, SystemFile};
use mlti_core::{
    characteristic_polynomial, classify_stability_with, min_energy_input_with, obs_gramian_finite,
    obs_gramian_infinite, observability_tensor, reach_gramian_finite, reach_gramian_infinite,
    reachability_tensor, u_eigenvalues, Complex64, DenseTensor, MltiSystem, PairedTensor, Shape, Tolerance,
};
use nalgebra::DMatrix;
use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;

fn py_err(e: impl Into<CliError>) -> PyErr {
    let e = e.into();
    match e.kind {
        ErrorKind::Validation => PyValueError::new_err(e.message),
        ErrorKind::Numerical => PyArithmeticError::new_err(e.message),
    }
}

fn tolerance(tol: Option<f64>) -> Tolerance {
    tol.map(Tolerance::with_base).unwrap_or_default()
}

/// Row-major nested lists to a matrix; rejects ragged input.
fn matrix(rows: &[Vec<f64>]) -> Result<DMatrix<f64>, CliError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return Err(CliError::validation("matrix must have at least one row and column"));
    }
    if let Some(k) = rows.iter().position(|row| row.len() != c) {
        return Err(CliError::validation(format!(
            "row {k} has {} entries, expected {c}",
            rows[k].len()
        )));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|row| row.iter().copied().collect()).collect()
}

#[pyclass(name = "DenseTensor", module = "mlti", frozen)]
pub struct PyDenseTensor {
    inner: DenseTensor,
}

#[pymethods]
impl PyDenseTensor {
    #[new]
    fn new(shape: Vec<usize>, data: Vec<f64>) -> PyResult<Self> {
        let shape = Shape::new(shape).map_err(py_err)?;
        Ok(PyDenseTensor {
            inner: DenseTensor::new(shape, data).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn zeros(shape: Vec<usize>) -> PyResult<Self> {
        Ok(PyDenseTensor {
            inner: DenseTensor::zeros(Shape::new(shape).map_err(py_err)?),
        })
    }

    #[getter]
    fn shape(&self) -> Vec<usize> {
        self.inner.extents().to_vec()
    }

    #[getter]
    fn data(&self) -> Vec<f64> {
        self.inner.data().to_vec()
    }

    fn get(&self, index: Vec<usize>) -> PyResult<f64> {
        let extents = self.inner.extents();
        if index.len() != extents.len() {
            return Err(PyValueError::new_err(format!(
                "index has {} entries, tensor has order {}",
                index.len(),
                extents.len()
            )));
        }
        if let Some(m) = index.iter().zip(extents).position(|(i, e)| i >= e) {
            return Err(PyValueError::new_err(format!(
                "index {} out of range for extent {} at mode {m}",
                index[m], extents[m]
            )));
        }
        Ok(self.inner.get(&index))
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        Ok(PyDenseTensor {
            inner: self.inner.sub(&other.inner).map_err(py_err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("DenseTensor(shape={:?})", self.inner.extents())
    }
}

#[pyclass(name = "PairedTensor", module = "mlti", frozen)]
pub struct PyPairedTensor {
    inner: PairedTensor<f64>,
}

fn paired(inner: PairedTensor<f64>) -> PyPairedTensor {
    PyPairedTensor { inner }
}

#[pymethods]
impl PyPairedTensor {
    /// `pairs` lists `(J_n, I_n)` per mode.
    #[new]
    fn new(pairs: Vec<(usize, usize)>, data: Vec<f64>) -> PyResult<Self> {
        Ok(paired(PairedTensor::new(pairs, data).map_err(py_err)?))
    }

    #[staticmethod]
    fn from_matrix(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(paired(PairedTensor::from_matrix(&matrix(&rows).map_err(py_err)?)))
    }

    /// Inverse of the unfolding: `phi(T) = rows`.
    #[staticmethod]
    fn from_unfolding(rows: Vec<Vec<f64>>, pairs: Vec<(usize, usize)>) -> PyResult<Self> {
        let m = matrix(&rows).map_err(py_err)?;
        Ok(paired(PairedTensor::phi_inverse(&m, pairs).map_err(py_err)?))
    }

    /// Outer product `F_1 o ... o F_N` of single-pair factors.
    #[staticmethod]
    fn from_factors(factors: Vec<PyRef<'_, PyPairedTensor>>) -> PyResult<Self> {
        let f: Vec<_> = factors.iter().map(|t| t.inner.clone()).collect();
        Ok(paired(PairedTensor::from_factors(&f).map_err(py_err)?))
    }

    #[staticmethod]
    fn identity(extents: Vec<usize>) -> Self {
        paired(PairedTensor::u_identity(&extents))
    }

    #[getter]
    fn pairs(&self) -> Vec<(usize, usize)> {
        self.inner.pairs().to_vec()
    }

    #[getter]
    fn data(&self) -> Vec<f64> {
        self.inner.data().to_vec()
    }

    /// Unfolded matrix as row-major nested lists.
    fn unfold(&self) -> Vec<Vec<f64>> {
        rows_of(&self.inner.phi())
    }

    fn einstein_product(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        Ok(paired(self.inner.einstein_product(&other.inner).map_err(py_err)?))
    }

    fn __matmul__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        self.einstein_product(other)
    }

    fn __add__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        Ok(paired(self.inner.add(&other.inner).map_err(py_err)?))
    }

    fn __sub__(&self, other: PyRef<'_, Self>) -> PyResult<Self> {
        Ok(paired(self.inner.sub(&other.inner).map_err(py_err)?))
    }

    fn scale(&self, factor: f64) -> Self {
        paired(self.inner.scale(factor))
    }

    fn apply(&self, x: PyRef<'_, PyDenseTensor>) -> PyResult<PyDenseTensor> {
        Ok(PyDenseTensor {
            inner: self.inner.einstein_apply(&x.inner).map_err(py_err)?,
        })
    }

    fn power(&self, k: u32) -> PyResult<Self> {
        Ok(paired(self.inner.einstein_power(k).map_err(py_err)?))
    }

    fn transpose(&self) -> Self {
        paired(self.inner.u_transpose())
    }

    #[pyo3(signature = (tol=None))]
    fn inverse(&self, tol: Option<f64>) -> PyResult<Self> {
        Ok(paired(self.inner.u_inverse_with(&tolerance(tol)).map_err(py_err)?))
    }

    fn det(&self) -> PyResult<f64> {
        self.inner.u_det().map_err(py_err)
    }

    #[pyo3(signature = (tol=None))]
    fn rank(&self, tol: Option<f64>) -> usize {
        self.inner.rank_u_with(&tolerance(tol))
    }

    #[pyo3(signature = (tol=None))]
    fn is_positive_definite(&self, tol: Option<f64>) -> bool {
        self.inner.is_u_positive_definite_with(&tolerance(tol))
    }

    /// `(min, max)` eigenvalues of the symmetric part of the unfolding.
    fn symmetric_eigen_extremes(&self) -> (f64, f64) {
        self.inner.symmetric_eigen_extremes()
    }

    fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    fn eigenvalues(&self) -> PyResult<Vec<Complex64>> {
        u_eigenvalues(&self.inner).map_err(py_err)
    }

    /// Characteristic polynomial coefficients, highest power first.
    fn characteristic_polynomial(&self) -> PyResult<Vec<f64>> {
        characteristic_polynomial(&self.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("PairedTensor(pairs={:?})", self.inner.pairs())
    }
}

#[pyclass(name = "MltiSystem", module = "mlti", frozen)]
pub struct PyMltiSystem {
    inner: MltiSystem,
}

#[pymethods]
impl PyMltiSystem {
    #[new]
    fn new(a: PyRef<'_, PyPairedTensor>, b: PyRef<'_, PyPairedTensor>, c: PyRef<'_, PyPairedTensor>) -> PyResult<Self> {
        Ok(PyMltiSystem {
            inner: MltiSystem::new(a.inner.clone(), b.inner.clone(), c.inner.clone()).map_err(py_err)?,
        })
    }

    /// Per-mode factor matrices, each as row-major nested lists.
    #[staticmethod]
    fn from_tucker(a: Vec<Vec<Vec<f64>>>, b: Vec<Vec<Vec<f64>>>, c: Vec<Vec<Vec<f64>>>) -> PyResult<Self> {
        let convert = |ms: &[Vec<Vec<f64>>]| -> PyResult<Vec<PairedTensor<f64>>> {
            ms.iter()
                .map(|m| Ok(PairedTensor::from_matrix(&matrix(m).map_err(py_err)?)))
                .collect()
        };
        Ok(PyMltiSystem {
            inner: MltiSystem::from_tucker(convert(&a)?, convert(&b)?, convert(&c)?).map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let file = SystemFile::parse(text).map_err(py_err)?;
        Ok(PyMltiSystem {
            inner: file.to_system().map_err(py_err)?,
        })
    }

    #[staticmethod]
    fn load(path: &str) -> PyResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PyValueError::new_err(format!("{path}: {e}")))?;
        Self::from_json(&text)
    }

    /// Canonical system-file text; `encoding` is "dense" or "tucker".
    #[pyo3(signature = (encoding="dense"))]
    fn to_json(&self, encoding: &str) -> PyResult<String> {
        let enc = match encoding {
            "dense" => Encoding::Dense,
            "tucker" => Encoding::Tucker,
            other => return Err(PyValueError::new_err(format!("unknown encoding {other:?}"))),
        };
        Ok(SystemFile::from_system(&self.inner, enc).map_err(py_err)?.to_canonical_string())
    }

    #[getter]
    fn a(&self) -> PyPairedTensor {
        paired(self.inner.a().clone())
    }

    #[getter]
    fn b(&self) -> PyPairedTensor {
        paired(self.inner.b().clone())
    }

    #[getter]
    fn c(&self) -> PyPairedTensor {
        paired(self.inner.c().clone())
    }

    #[getter]
    fn state_shape(&self) -> Vec<usize> {
        self.inner.state_shape().extents().to_vec()
    }

    #[getter]
    fn input_shape(&self) -> Vec<usize> {
        self.inner.input_shape().extents().to_vec()
    }

    #[getter]
    fn output_shape(&self) -> Vec<usize> {
        self.inner.output_shape().extents().to_vec()
    }

    /// Returns `(states, outputs)`, each of length `steps + 1`.
    fn simulate(
        &self,
        x0: PyRef<'_, PyDenseTensor>,
        inputs: Vec<PyRef<'_, PyDenseTensor>>,
        steps: usize,
    ) -> PyResult<(Vec<PyDenseTensor>, Vec<PyDenseTensor>)> {
        let u: Vec<DenseTensor> = inputs.iter().map(|t| t.inner.clone()).collect();
        let traj = self.inner.simulate(&x0.inner, &u, steps).map_err(py_err)?;
        let wrap = |ts: Vec<DenseTensor>| ts.into_iter().map(|inner| PyDenseTensor { inner }).collect();
        Ok((wrap(traj.states), wrap(traj.outputs)))
    }

    fn eigenvalues(&self) -> PyResult<Vec<Complex64>> {
        u_eigenvalues(self.inner.a()).map_err(py_err)
    }

    /// "asymptotically-stable", "stable" or "unstable".
    #[pyo3(signature = (tol=None))]
    fn stability(&self, tol: Option<f64>) -> PyResult<&'static str> {
        Ok(classify_stability_with(self.inner.a(), &tolerance(tol))
            .map_err(py_err)?
            .class
            .as_str())
    }

    #[pyo3(signature = (tol=None))]
    fn reachability_rank(&self, tol: Option<f64>) -> PyResult<usize> {
        Ok(reachability_tensor(&self.inner).map_err(py_err)?.rank_u_with(&tolerance(tol)))
    }

    #[pyo3(signature = (tol=None))]
    fn observability_rank(&self, tol: Option<f64>) -> PyResult<usize> {
        Ok(observability_tensor(&self.inner).map_err(py_err)?.rank_u_with(&tolerance(tol)))
    }

    #[pyo3(signature = (tol=None))]
    fn is_reachable(&self, tol: Option<f64>) -> PyResult<bool> {
        Ok(self.reachability_rank(tol)? == self.inner.state_len())
    }

    #[pyo3(signature = (tol=None))]
    fn is_observable(&self, tol: Option<f64>) -> PyResult<bool> {
        Ok(self.observability_rank(tol)? == self.inner.state_len())
    }

    /// Finite-horizon Gramian, or the Lyapunov solution when `horizon` is None.
    #[pyo3(signature = (horizon=None, tol=None))]
    fn reach_gramian(&self, horizon: Option<usize>, tol: Option<f64>) -> PyResult<PyPairedTensor> {
        let w = match horizon {
            Some(t) => reach_gramian_finite(&self.inner, 0, t),
            None => reach_gramian_infinite(&self.inner, &tolerance(tol)),
        };
        Ok(paired(w.map_err(py_err)?))
    }

    #[pyo3(signature = (horizon=None, tol=None))]
    fn obs_gramian(&self, horizon: Option<usize>, tol: Option<f64>) -> PyResult<PyPairedTensor> {
        let w = match horizon {
            Some(t) => obs_gramian_finite(&self.inner, 0, t),
            None => obs_gramian_infinite(&self.inner, &tolerance(tol)),
        };
        Ok(paired(w.map_err(py_err)?))
    }

    /// Minimum-energy inputs taking `x0` to `x1` in `horizon` steps.
    #[pyo3(signature = (x0, x1, horizon, tol=None))]
    fn min_energy_input(
        &self,
        x0: PyRef<'_, PyDenseTensor>,
        x1: PyRef<'_, PyDenseTensor>,
        horizon: usize,
        tol: Option<f64>,
    ) -> PyResult<Vec<PyDenseTensor>> {
        let u = min_energy_input_with(&self.inner, &x0.inner, &x1.inner, horizon, &tolerance(tol)).map_err(py_err)?;
        Ok(u.into_iter().map(|inner| PyDenseTensor { inner }).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "MltiSystem(state={:?}, input={:?}, output={:?})",
            self.inner.state_shape().extents(),
            self.inner.input_shape().extents(),
            self.inner.output_shape().extents()
        )
    }
}

#[pymodule]
fn mlti(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDenseTensor>()?;
    m.add_class::<PyPairedTensor>()?;
    m.add_class::<PyMltiSystem>()?;
    Ok(())
}
