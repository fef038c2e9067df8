//! Python bindings: fields, matrices, decompositions and certificates.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use idemsum::canon::frobenius_form;
use idemsum::json::{cert_from_json, cert_to_json};
use idemsum::oracle::min_idempotent_sum;
use idemsum::pipelines::{decompose_with, is_sum_of_idempotents, sn_bounds, DecompCert, Mode};
use idemsum::two_idem::{decide_diff2, decide_sum2};

create_exception!(idemsum, IdemsumError, PyException, "Raised for any library error; the message starts with its code.");

fn to_py(e: idemsum::Error) -> PyErr {
    IdemsumError::new_err(format!("{}: {e}", e.code()))
}

trait OrPy<T> {
    fn or_py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for idemsum::Result<T> {
    fn or_py(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// Finite field `F_{p^k}`; elements are integer codes below the order.
#[pyclass(name = "Field", frozen, skip_from_py_object, module = "idemsum")]
#[derive(Clone)]
struct PyField(idemsum::Field);

#[pymethods]
impl PyField {
    #[new]
    #[pyo3(signature = (p, k = 1, modulus = None))]
    fn new(p: u64, k: usize, modulus: Option<Vec<u64>>) -> PyResult<Self> {
        idemsum::Field::new(p, k, modulus.as_deref()).map(PyField).or_py()
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.p()
    }

    #[getter]
    fn k(&self) -> usize {
        self.0.k()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, k={})", self.0.p(), self.0.k())
    }
}

/// Square or rectangular matrix over a `Field`.
#[pyclass(name = "Matrix", frozen, skip_from_py_object, module = "idemsum")]
#[derive(Clone)]
struct PyMatrix(idemsum::Mat);

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        idemsum::Mat::from_codes(&field.0, &rows).map(PyMatrix).or_py()
    }

    #[staticmethod]
    fn identity(field: &PyField, n: usize) -> Self {
        PyMatrix(idemsum::Mat::identity(&field.0, n))
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField(self.0.field().clone())
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.0.rows(), self.0.cols())
    }

    fn to_list(&self) -> Vec<Vec<u32>> {
        (0..self.0.rows()).map(|i| self.0.row(i).iter().map(|x| x.code()).collect()).collect()
    }

    fn trace(&self) -> PyResult<u32> {
        self.0.trace().map(|x| x.code()).or_py()
    }

    fn rank(&self) -> usize {
        self.0.rank()
    }

    fn is_idempotent(&self) -> PyResult<bool> {
        self.0.is_idempotent().or_py()
    }

    /// Invariant factors as coefficient lists, constant term first.
    fn invariant_factors(&self) -> PyResult<Vec<Vec<u32>>> {
        let (inv, _) = frobenius_form(&self.0).or_py()?;
        Ok(inv.factors().iter().map(|p| p.coeffs().iter().map(|x| x.code()).collect()).collect())
    }

    fn __add__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.0.add(&other.0).map(PyMatrix).or_py()
    }

    fn __sub__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.0.sub(&other.0).map(PyMatrix).or_py()
    }

    fn __matmul__(&self, other: &PyMatrix) -> PyResult<PyMatrix> {
        self.0.mul(&other.0).map(PyMatrix).or_py()
    }

    fn __eq__(&self, other: &PyMatrix) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Matrix({:?})", self.to_list())
    }
}

/// Signed sum of idempotents certified to equal a target matrix.
#[pyclass(name = "Cert", frozen, module = "idemsum")]
struct PyCert(DecompCert);

#[pymethods]
impl PyCert {
    #[getter]
    fn pipeline(&self) -> String {
        self.0.pipeline.clone()
    }

    #[getter]
    fn signs(&self) -> Vec<i64> {
        self.0.signs.iter().map(|s| s.value()).collect()
    }

    #[getter]
    fn parts(&self) -> Vec<PyMatrix> {
        self.0.parts.iter().cloned().map(PyMatrix).collect()
    }

    fn __len__(&self) -> usize {
        self.0.count()
    }

    fn verify(&self, target: &PyMatrix) -> bool {
        self.0.verify(&target.0)
    }

    fn to_json(&self) -> String {
        cert_to_json(&self.0).to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<PyCert> {
        let v = serde_json::from_str(text).map_err(|e| IdemsumError::new_err(format!("Parse: {e}")))?;
        cert_from_json(&v).map(PyCert).or_py()
    }
}

#[pyfunction]
#[pyo3(signature = (a, mode = "auto", seed = 0))]
fn decompose(a: &PyMatrix, mode: &str, seed: u64) -> PyResult<PyCert> {
    let mode: Mode = mode.parse().or_py()?;
    decompose_with(&a.0, mode, seed).map(PyCert).or_py()
}

#[pyfunction]
fn is_sum(a: &PyMatrix) -> PyResult<bool> {
    is_sum_of_idempotents(&a.0).or_py()
}

#[pyfunction]
fn is_diff2(a: &PyMatrix) -> PyResult<bool> {
    decide_diff2(&a.0).or_py()
}

#[pyfunction]
fn is_sum2(a: &PyMatrix) -> PyResult<bool> {
    decide_sum2(&a.0).or_py()
}

/// `(lower, upper)` bounds on the idempotent count for `n x n` matrices.
#[pyfunction]
fn bounds(n: usize, field: &PyField) -> (usize, usize) {
    let b = sn_bounds(n, &field.0);
    (b.lower, b.upper)
}

/// Exhaustive minimal count, `None` above `cap`.
#[pyfunction]
#[pyo3(signature = (a, cap = 6))]
fn min_count(a: &PyMatrix, cap: usize) -> PyResult<Option<usize>> {
    min_idempotent_sum(&a.0, cap).or_py()
}

#[pymodule]
#[pyo3(name = "idemsum")]
fn py_idemsum(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("IdemsumError", m.py().get_type::<IdemsumError>())?;
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add_class::<PyCert>()?;
    m.add_function(wrap_pyfunction!(decompose, m)?)?;
    m.add_function(wrap_pyfunction!(is_sum, m)?)?;
    m.add_function(wrap_pyfunction!(is_diff2, m)?)?;
    m.add_function(wrap_pyfunction!(is_sum2, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(min_count, m)?)?;
    Ok(())
}
