//! Python bindings. Reports come back as dictionaries decoded from the same
//! JSON the CLI prints.

#![allow(clippy::useless_conversion)]

pub mod api;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use hasse_forms::forms::is_unimodular;
use hasse_forms::schema::{matrix_from_json, matrix_to_json, EntryJson};
use hasse_forms::{CurveSpec, Error};

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn loads(py: Python<'_>, text: String) -> PyResult<PyObject> {
    Ok(py.import_bound("json")?.call_method1("loads", (text,))?.unbind())
}

/// A curve over `F_q`: the affine line or `y^2 = x^3 + a x + b`.
#[pyclass(name = "Curve", module = "hasse_forms", frozen)]
#[derive(Clone)]
pub struct PyCurve {
    inner: CurveSpec,
}

#[pymethods]
impl PyCurve {
    /// `Curve(q, a, b)` over a prime field. Use `from_json` for extension coefficients.
    #[new]
    fn new(q: u64, a: i64, b: i64) -> PyResult<Self> {
        let f = api::field_of_size(q).map_err(py_err)?;
        let inner = CurveSpec::weierstrass_ints(&f, a, b).map_err(py_err)?;
        Ok(PyCurve { inner })
    }

    #[staticmethod]
    fn polyline(q: u64) -> PyResult<Self> {
        let f = api::field_of_size(q).map_err(py_err)?;
        Ok(PyCurve {
            inner: CurveSpec::polyline(&f),
        })
    }

    #[staticmethod]
    fn from_json(doc: &str) -> PyResult<Self> {
        Ok(PyCurve {
            inner: api::curve_from_json(doc).map_err(py_err)?,
        })
    }

    fn to_json(&self) -> String {
        api::curve_to_json(&self.inner)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.field().q()
    }

    fn is_smooth(&self) -> bool {
        self.inner.is_smooth()
    }

    fn point_count(&self, py: Python<'_>) -> PyResult<PyObject> {
        loads(py, api::point_count(&self.inner).map_err(py_err)?)
    }

    fn hasse(&self, py: Python<'_>, rank: usize) -> PyResult<PyObject> {
        loads(py, api::hasse(&self.inner, rank).map_err(py_err)?)
    }

    fn is_ufd(&self) -> PyResult<bool> {
        hasse_forms::ufd_check(&self.inner).map_err(py_err)
    }

    fn binary_genus_lower_bound(&self) -> PyResult<Option<u64>> {
        hasse_forms::binary_genus_lower_bound(&self.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Curve({})", self.inner)
    }
}

/// A nondegenerate symmetric Gram matrix with entries in the coordinate ring.
#[pyclass(name = "GramMatrix", module = "hasse_forms", frozen)]
pub struct PyGramMatrix {
    inner: hasse_forms::GramMatrix,
}

#[pymethods]
impl PyGramMatrix {
    /// Rows of expression strings such as `"3*y^2"` or `"(1-x)^2"`.
    #[new]
    fn new(curve: &PyCurve, rows: Vec<Vec<String>>) -> PyResult<Self> {
        let rows: Vec<Vec<EntryJson>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(EntryJson::Expr).collect())
            .collect();
        let m = matrix_from_json(&curve.inner, &rows).map_err(py_err)?;
        Ok(PyGramMatrix {
            inner: hasse_forms::GramMatrix::new(m).map_err(py_err)?,
        })
    }

    #[getter]
    fn rank(&self) -> usize {
        self.inner.n()
    }

    fn det(&self) -> String {
        self.inner.det().to_string()
    }

    fn is_unimodular(&self) -> bool {
        is_unimodular(&self.inner)
    }

    fn rows<'py>(&self, py: Python<'py>) -> Bound<'py, PyList> {
        PyList::new_bound(py, matrix_to_json(self.inner.matrix()))
    }

    fn __repr__(&self) -> String {
        format!("GramMatrix({:?})", self.inner)
    }
}

/// Genus witness report for a witness document (see the CLI `genus-verify`).
#[pyfunction]
#[pyo3(signature = (doc, inspection_degree = None))]
fn genus_verify(py: Python<'_>, doc: &str, inspection_degree: Option<usize>) -> PyResult<PyObject> {
    loads(py, api::genus_verify(doc, inspection_degree).map_err(py_err)?)
}

/// Bounded isometry search for a search document.
#[pyfunction]
#[pyo3(signature = (doc, degree_bound = None, deg_y = None, budget = None))]
fn isom_search(
    py: Python<'_>,
    doc: &str,
    degree_bound: Option<usize>,
    deg_y: Option<usize>,
    budget: Option<u64>,
) -> PyResult<PyObject> {
    let out = py.allow_threads(|| api::isom_search(doc, degree_bound, deg_y, budget));
    loads(py, out.map_err(py_err)?)
}

#[pyfunction]
#[pyo3(signature = (doc, inspection_degree = 2))]
fn form_report(py: Python<'_>, doc: &str, inspection_degree: usize) -> PyResult<PyObject> {
    loads(py, api::form_report(doc, inspection_degree).map_err(py_err)?)
}

#[pyfunction]
fn verify_paper(py: Python<'_>) -> PyResult<PyObject> {
    let out = py.allow_threads(api::verify_paper);
    loads(py, out.map_err(py_err)?)
}

#[pyfunction]
fn factor(q: u64, poly: &str) -> PyResult<String> {
    api::factor_poly(q, poly).map_err(py_err)
}

#[pymodule]
#[pyo3(name = "hasse_forms")]
fn hasse_forms_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyGramMatrix>()?;
    m.add_function(wrap_pyfunction!(genus_verify, m)?)?;
    m.add_function(wrap_pyfunction!(isom_search, m)?)?;
    m.add_function(wrap_pyfunction!(form_report, m)?)?;
    m.add_function(wrap_pyfunction!(verify_paper, m)?)?;
    m.add_function(wrap_pyfunction!(factor, m)?)?;
    Ok(())
}
