//! Python bindings. Numbers go in as int, float, str (`"p/q"` or decimal) or
//! `fractions.Fraction`, and come back as `fractions.Fraction`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyList;

use tropfw_core::projection::{compute_triangle, projection_matrix};
use tropfw_core::search::{search_lex_with, search_priority_with, SearchOutcome};
use tropfw_core::{
    distance_sum as core_distance_sum, fermat_weber_point_with, project_onto_tconv, trop_distance, verify_fw_point,
    DataMatrix, FwSolver, PairIndex, Scalar, TropicalPoint,
};

fn value_error(e: tropfw_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_scalar(obj: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    if let Ok(i) = obj.extract::<i64>() {
        return Ok(Scalar::from(i));
    }
    if let Ok(s) = obj.extract::<String>() {
        return s.parse().map_err(value_error);
    }
    if let (Ok(n), Ok(d)) = (obj.getattr("numerator"), obj.getattr("denominator")) {
        let text = format!("{}/{}", n.str()?, d.str()?);
        return text.parse().map_err(value_error);
    }
    if let Ok(f) = obj.extract::<f64>() {
        return Scalar::from_f64_exact(f).map_err(value_error);
    }
    Err(PyValueError::new_err(format!("cannot read {} as a number", obj.repr()?)))
}

fn to_point(obj: &Bound<'_, PyAny>) -> PyResult<TropicalPoint> {
    let coords = obj.try_iter()?.map(|c| to_scalar(&c?)).collect::<PyResult<Vec<_>>>()?;
    TropicalPoint::normalize(coords).map_err(value_error)
}

fn to_points(obj: &Bound<'_, PyAny>) -> PyResult<Vec<TropicalPoint>> {
    obj.try_iter()?.map(|r| to_point(&r?)).collect()
}

fn to_matrix(obj: &Bound<'_, PyAny>) -> PyResult<DataMatrix> {
    DataMatrix::new(to_points(obj)?).map_err(value_error)
}

fn fraction<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((s.to_string(),))
}

fn point_list<'py>(py: Python<'py>, p: &TropicalPoint) -> PyResult<Bound<'py, PyList>> {
    let items = p.coords().iter().map(|c| fraction(py, c)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn solver(name: &str) -> PyResult<FwSolver> {
    name.parse().map_err(value_error)
}

/// Data points as rows, normalized to first coordinate zero.
#[pyclass(name = "DataMatrix")]
struct PyDataMatrix {
    inner: DataMatrix,
}

#[pymethods]
impl PyDataMatrix {
    #[new]
    fn new(rows: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(PyDataMatrix { inner: to_matrix(rows)? })
    }

    #[getter]
    fn nrows(&self) -> usize {
        self.inner.nrows()
    }

    #[getter]
    fn ncols(&self) -> usize {
        self.inner.ncols()
    }

    fn rows<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyList>> {
        let rows = self.inner.rows().iter().map(|r| point_list(py, r)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, rows)
    }

    #[pyo3(signature = (solver = "network"))]
    fn fermat_weber_point<'py>(&self, py: Python<'py>, solver: &str) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyAny>)> {
        fw_of(py, &self.inner, solver)
    }

    /// Whether the last row attains the Fermat-Weber objective.
    fn verify(&self) -> PyResult<bool> {
        verify_fw_point(&self.inner).map_err(value_error)
    }

    fn projection_matrix(&self, d1: usize, d2: usize) -> PyResult<PyDataMatrix> {
        let pair = PairIndex::new(d1, d2, self.inner.ncols()).map_err(value_error)?;
        Ok(PyDataMatrix { inner: projection_matrix(&self.inner, pair).map_err(value_error)? })
    }

    fn triangle<'py>(&self, py: Python<'py>, d1: usize, d2: usize) -> PyResult<Bound<'py, PyList>> {
        let pair = PairIndex::new(d1, d2, self.inner.ncols()).map_err(value_error)?;
        let t = compute_triangle(&self.inner, pair).map_err(value_error)?;
        let verts = t.vertices().iter().map(|v| point_list(py, v)).collect::<PyResult<Vec<_>>>()?;
        PyList::new(py, verts)
    }

    fn __len__(&self) -> usize {
        self.inner.nrows()
    }

    fn __repr__(&self) -> String {
        format!("DataMatrix({} x {})", self.inner.nrows(), self.inner.ncols())
    }
}

/// Result of a triangle search.
#[pyclass(name = "SearchResult", get_all)]
struct PySearchResult {
    success: bool,
    pair: Option<(usize, usize)>,
    steps: usize,
    visited: Vec<(usize, usize)>,
    triangle: Option<Vec<Vec<String>>>,
    fw_point: Vec<String>,
    fw_objective: String,
}

#[pymethods]
impl PySearchResult {
    fn __repr__(&self) -> String {
        match self.pair {
            Some((a, b)) => format!("SearchResult(success, pair=({a},{b}), steps={})", self.steps),
            None => format!("SearchResult(fail, steps={})", self.steps),
        }
    }
}

impl From<SearchOutcome> for PySearchResult {
    fn from(out: SearchOutcome) -> Self {
        let strings = |p: &TropicalPoint| p.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>();
        PySearchResult {
            success: out.is_success(),
            pair: out.winning_pair().map(|p| (p.d1(), p.d2())),
            steps: out.steps(),
            visited: out.visited().iter().map(|p| (p.d1(), p.d2())).collect(),
            triangle: out.triangle().map(|t| t.vertices().iter().map(strings).collect()),
            fw_point: strings(&out.fw.point),
            fw_objective: out.fw.objective.to_string(),
        }
    }
}

fn fw_of<'py>(py: Python<'py>, x: &DataMatrix, name: &str) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyAny>)> {
    let fw = fermat_weber_point_with(x, solver(name)?).map_err(value_error)?;
    Ok((point_list(py, &fw.point)?, fraction(py, &fw.objective)?))
}

/// Representative with first coordinate zero.
#[pyfunction]
fn normalize<'py>(py: Python<'py>, point: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
    point_list(py, &to_point(point)?)
}

#[pyfunction]
fn distance<'py>(py: Python<'py>, u: &Bound<'py, PyAny>, v: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let d = trop_distance(&to_point(u)?, &to_point(v)?).map_err(value_error)?;
    fraction(py, &d)
}

#[pyfunction]
fn distance_sum<'py>(py: Python<'py>, y: &Bound<'py, PyAny>, rows: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let s = core_distance_sum(&to_point(y)?, &to_matrix(rows)?).map_err(value_error)?;
    fraction(py, &s)
}

/// Projection of `point` onto the tropical hull of `generators`.
#[pyfunction]
fn project<'py>(py: Python<'py>, point: &Bound<'py, PyAny>, generators: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyList>> {
    let p = project_onto_tconv(&to_point(point)?, &to_points(generators)?).map_err(value_error)?;
    point_list(py, &p)
}

/// `(point, objective)` for the rows.
#[pyfunction]
#[pyo3(signature = (rows, solver = "network"))]
fn fermat_weber_point<'py>(
    py: Python<'py>,
    rows: &Bound<'py, PyAny>,
    solver: &str,
) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyAny>)> {
    fw_of(py, &to_matrix(rows)?, solver)
}

/// Whether the last row is a Fermat-Weber point of all rows.
#[pyfunction]
fn verify(rows: &Bound<'_, PyAny>) -> PyResult<bool> {
    verify_fw_point(&to_matrix(rows)?).map_err(value_error)
}

/// Lexicographic (`"lex"`) or priority (`"priority"`) triangle search.
#[pyfunction]
#[pyo3(signature = (rows, algorithm = "lex", solver = "network"))]
fn search(rows: &Bound<'_, PyAny>, algorithm: &str, solver: &str) -> PyResult<PySearchResult> {
    let x = to_matrix(rows)?;
    let fw_solver = self::solver(solver)?;
    let out = match algorithm {
        "lex" => search_lex_with(&x, fw_solver),
        "priority" => search_priority_with(&x, fw_solver),
        other => return Err(PyValueError::new_err(format!("unknown algorithm `{other}`"))),
    }
    .map_err(value_error)?;
    Ok(out.into())
}

/// Exact tropical Fermat-Weber points, projections and triangle search.
#[pymodule]
fn tropfw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataMatrix>()?;
    m.add_class::<PySearchResult>()?;
    m.add_function(wrap_pyfunction!(normalize, m)?)?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(distance_sum, m)?)?;
    m.add_function(wrap_pyfunction!(project, m)?)?;
    m.add_function(wrap_pyfunction!(fermat_weber_point, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(search, m)?)?;
    Ok(())
}
