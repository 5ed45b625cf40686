//! Python bindings: fields, matrices, closed forms, exhaustive counts and the
//! unimodular-density check.

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use ::fqcensus as core;
use core::census::{self, CensusParams};
use core::commands::{field_for_q, Problem};
use core::conjecture::{verify_conjecture as verify, ConjectureCase};
use core::formulas;
use core::poly::{self, PolyMatrix};
use core::{linalg, FieldCtx, MatrixFq};

create_exception!(fqcensus, BudgetExceeded, PyValueError, "The requested enumeration exceeds the budget.");
create_exception!(fqcensus, Disagreement, PyRuntimeError, "Two independent computations disagreed.");

fn to_py(err: core::Error) -> PyErr {
    match err {
        core::Error::BudgetExceeded { .. } => BudgetExceeded::new_err(err.to_string()),
        core::Error::Disagreement(_) => Disagreement::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

trait OrPyErr<T> {
    fn py_err(self) -> PyResult<T>;
}

impl<T> OrPyErr<T> for core::Result<T> {
    fn py_err(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// The finite field with `q` elements.
#[pyclass(name = "Field", module = "fqcensus", frozen)]
#[derive(Clone)]
struct PyField {
    ctx: FieldCtx,
}

#[pymethods]
impl PyField {
    /// `modulus` lists the defining polynomial's coefficients, low to high.
    #[new]
    #[pyo3(signature = (q, modulus = None))]
    fn new(q: u64, modulus: Option<Vec<u32>>) -> PyResult<Self> {
        Ok(PyField { ctx: field_for_q(q, modulus.as_deref()).py_err()? })
    }

    #[getter]
    fn q(&self) -> u32 {
        self.ctx.q()
    }

    #[getter]
    fn p(&self) -> u32 {
        self.ctx.spec().p
    }

    #[getter]
    fn e(&self) -> u32 {
        self.ctx.spec().e
    }

    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.ctx.spec().modulus.clone()
    }

    fn add(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.ctx.add(self.ctx.element(a).py_err()?, self.ctx.element(b).py_err()?).code())
    }

    fn sub(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.ctx.sub(self.ctx.element(a).py_err()?, self.ctx.element(b).py_err()?).code())
    }

    fn mul(&self, a: u64, b: u64) -> PyResult<u32> {
        Ok(self.ctx.mul(self.ctx.element(a).py_err()?, self.ctx.element(b).py_err()?).code())
    }

    fn inv(&self, a: u64) -> PyResult<u32> {
        Ok(self.ctx.inv(self.ctx.element(a).py_err()?).py_err()?.code())
    }

    fn pow(&self, a: u64, e: u64) -> PyResult<u32> {
        Ok(self.ctx.pow(self.ctx.element(a).py_err()?, e).code())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.ctx == other.ctx
    }

    fn __repr__(&self) -> String {
        format!("Field(q={}, modulus={:?})", self.ctx.q(), self.ctx.spec().modulus)
    }
}

/// A dense matrix over a `Field`, entries given as element codes.
#[pyclass(name = "Matrix", module = "fqcensus", frozen)]
#[derive(Clone)]
struct PyMatrix {
    inner: MatrixFq,
}

#[pymethods]
impl PyMatrix {
    #[new]
    fn new(field: &PyField, rows: Vec<Vec<u32>>) -> PyResult<Self> {
        Ok(PyMatrix { inner: MatrixFq::from_rows(&field.ctx, &rows).py_err()? })
    }

    /// The matrix with the given base-`q` code (first entry most significant).
    #[staticmethod]
    fn from_code(field: &PyField, rows: usize, cols: usize, code: u64) -> PyResult<Self> {
        let size = linalg::checked_pow(field.ctx.q() as u64, rows * cols);
        if size.is_some_and(|s| code >= s) {
            return Err(PyValueError::new_err(format!("code {code} out of range for {rows}x{cols}")));
        }
        Ok(PyMatrix { inner: MatrixFq::from_code(&field.ctx, rows, cols, code) })
    }

    #[getter]
    fn shape(&self) -> (usize, usize) {
        (self.inner.rows(), self.inner.cols())
    }

    #[getter]
    fn field(&self) -> PyField {
        PyField { ctx: self.inner.ctx().clone() }
    }

    fn code(&self) -> u64 {
        self.inner.code()
    }

    fn to_list(&self) -> Vec<Vec<u32>> {
        self.inner.to_nested()
    }

    fn rank(&self) -> usize {
        self.inner.rank()
    }

    fn transpose(&self) -> Self {
        PyMatrix { inner: self.inner.transpose() }
    }

    /// Kernel basis as columns.
    fn kernel(&self) -> Self {
        PyMatrix { inner: self.inner.kernel() }
    }

    /// Coefficients of `det(xI - A)`, low to high.
    fn char_poly(&self) -> PyResult<Vec<u32>> {
        Ok(self.inner.char_poly().py_err()?.codes())
    }

    fn __matmul__(&self, other: &Self) -> PyResult<Self> {
        Ok(PyMatrix { inner: self.inner.mul(&other.inner).py_err()? })
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Matrix(q={}, {:?})", self.inner.ctx().q(), self.inner.to_nested())
    }
}

#[pyfunction]
fn psi(n: u64, k: u64, q: u64) -> PyResult<BigUint> {
    formulas::psi(n, k, q).py_err()
}

#[pyfunction]
fn sigma(n: u64, k: u64, l: u64, q: u64) -> PyResult<BigUint> {
    formulas::sigma_formula(n, k, l, q).py_err()
}

#[pyfunction]
#[pyo3(signature = (k, l, q, recurrence = false))]
fn tau(k: u64, l: u64, q: u64, recurrence: bool) -> PyResult<BigUint> {
    if recurrence {
        formulas::tau_recurrence(k, l, q).py_err()
    } else {
        formulas::tau_closed(k, l, q).py_err()
    }
}

#[pyfunction]
fn mu(k: u64, l: u64, q: u64) -> PyResult<BigUint> {
    formulas::mu(k, l, q).py_err()
}

#[pyfunction]
fn gauss_binom(n: u64, k: u64, q: u64) -> PyResult<BigUint> {
    formulas::gauss_binom(n, k, q).py_err()
}

#[pyfunction]
fn gl_order(k: u64, q: u64) -> PyResult<BigUint> {
    formulas::gl_order(k, q).py_err()
}

/// Returned as a `fractions.Fraction`.
#[pyfunction]
fn delta(py: Python<'_>, n: u64, k: u64, q: u64) -> PyResult<PyObject> {
    let d = formulas::delta(n, k, q).py_err()?;
    let fraction = py.import_bound("fractions")?.getattr("Fraction")?;
    Ok(fraction.call1((d.numer().clone(), d.denom().clone()))?.unbind())
}

fn params(field: &PyField, n: usize, k: usize, jobs: Option<usize>, budget: Option<u64>) -> PyResult<CensusParams> {
    let mut p = CensusParams::new(&field.ctx, n, k).py_err()?;
    if let Some(j) = jobs {
        p = p.with_jobs(j);
    }
    if let Some(b) = budget {
        p = p.with_budget(b);
    }
    Ok(p)
}

/// Exhaustive count for `problem` in {"completable", "pencil", "reachable", "simple"}.
#[pyfunction]
#[pyo3(signature = (problem, field, n, k, jobs = None, budget = None))]
fn count(
    py: Python<'_>,
    problem: &str,
    field: &PyField,
    n: usize,
    k: usize,
    jobs: Option<usize>,
    budget: Option<u64>,
) -> PyResult<BigUint> {
    let problem: Problem = problem.parse().py_err()?;
    let p = params(field, n, k, jobs, budget)?;
    py.allow_threads(|| problem.run(&p)).py_err()
}

#[pyfunction]
#[pyo3(signature = (field, n, k, l, jobs = None, budget = None))]
fn sigma_oracle(
    py: Python<'_>,
    field: &PyField,
    n: usize,
    k: usize,
    l: usize,
    jobs: Option<usize>,
    budget: Option<u64>,
) -> PyResult<BigUint> {
    let p = params(field, n, k, jobs, budget)?.with_l(l).py_err()?;
    py.allow_threads(|| census::sigma_oracle(&p)).py_err()
}

#[pyfunction]
#[pyo3(signature = (field, n, k, l, jobs = None, budget = None))]
fn tau_oracle(
    py: Python<'_>,
    field: &PyField,
    n: usize,
    k: usize,
    l: usize,
    jobs: Option<usize>,
    budget: Option<u64>,
) -> PyResult<BigUint> {
    let p = params(field, n, k, jobs, budget)?.with_l(l).py_err()?;
    py.allow_threads(|| census::tau_oracle(&p)).py_err()
}

#[pyfunction]
fn is_zero_kernel_pair(c: &PyMatrix, a: &PyMatrix) -> PyResult<bool> {
    linalg::is_zero_kernel_pair(&c.inner, &a.inner).py_err()
}

#[pyfunction]
fn is_reachable(a: &PyMatrix, b: &PyMatrix) -> PyResult<bool> {
    linalg::is_reachable(&a.inner, &b.inner).py_err()
}

fn poly_matrix(field: &PyField, entries: Vec<Vec<Vec<u32>>>) -> PyResult<PolyMatrix> {
    PolyMatrix::from_codes(&field.ctx, &entries).py_err()
}

/// Invariant factors of a polynomial matrix. `entries[i][j]` holds the
/// coefficients of entry `(i, j)`, low to high; factors come back the same way.
#[pyfunction]
fn smith_invariant_factors(field: &PyField, entries: Vec<Vec<Vec<u32>>>) -> PyResult<Vec<Vec<u32>>> {
    let m = poly_matrix(field, entries)?;
    Ok(poly::smith_invariant_factors(&m).invariant_factors.iter().map(|f| f.codes()).collect())
}

#[pyfunction]
fn is_unimodular(field: &PyField, entries: Vec<Vec<Vec<u32>>>) -> PyResult<bool> {
    poly::is_unimodular(&poly_matrix(field, entries)?).py_err()
}

/// Exhaustive unimodular fraction of the degree-`m` family, as a dict.
#[pyfunction]
#[pyo3(signature = (field, n, k, m, jobs = None, budget = None))]
fn verify_conjecture(
    py: Python<'_>,
    field: &PyField,
    n: usize,
    k: usize,
    m: usize,
    jobs: Option<usize>,
    budget: Option<u64>,
) -> PyResult<Py<PyDict>> {
    let mut case = ConjectureCase::new(&field.ctx, n, k, m).py_err()?;
    if let Some(j) = jobs {
        case = case.with_jobs(j);
    }
    if let Some(b) = budget {
        case = case.with_budget(b);
    }
    let v = py.allow_threads(|| verify(&case)).py_err()?;
    let fraction = py.import_bound("fractions")?.getattr("Fraction")?;
    let out = PyDict::new_bound(py);
    out.set_item("unimodular_count", v.unimodular_count)?;
    out.set_item("total", v.total)?;
    out.set_item("predicted", fraction.call1((v.predicted.numer().clone(), v.predicted.denom().clone()))?)?;
    out.set_item("observed", fraction.call1((v.observed.numer().clone(), v.observed.denom().clone()))?)?;
    out.set_item("matched", v.matched)?;
    match v.counterexample {
        Some((code, member)) => out.set_item("counterexample", (code, PyList::new_bound(py, member.codes())))?,
        None => out.set_item("counterexample", py.None())?,
    }
    Ok(out.unbind())
}

#[pymodule]
fn fqcensus(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyField>()?;
    m.add_class::<PyMatrix>()?;
    m.add("BudgetExceeded", m.py().get_type_bound::<BudgetExceeded>())?;
    m.add("Disagreement", m.py().get_type_bound::<Disagreement>())?;
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(sigma, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(mu, m)?)?;
    m.add_function(wrap_pyfunction!(gauss_binom, m)?)?;
    m.add_function(wrap_pyfunction!(gl_order, m)?)?;
    m.add_function(wrap_pyfunction!(delta, m)?)?;
    m.add_function(wrap_pyfunction!(count, m)?)?;
    m.add_function(wrap_pyfunction!(sigma_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(tau_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(is_zero_kernel_pair, m)?)?;
    m.add_function(wrap_pyfunction!(is_reachable, m)?)?;
    m.add_function(wrap_pyfunction!(smith_invariant_factors, m)?)?;
    m.add_function(wrap_pyfunction!(is_unimodular, m)?)?;
    m.add_function(wrap_pyfunction!(verify_conjecture, m)?)?;
    Ok(())
}
