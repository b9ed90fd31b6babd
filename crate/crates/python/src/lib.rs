//! Python bindings: addresses, cells, geodesics, common paths and measures.

use num_rational::BigRational;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use sgasket::inequality;
use sgasket::interpolation::{self, Target};
use sgasket::measures::{self, PushforwardSpec, SelfSimilarMeasure1D};
use sgasket::rational::parse_rational;
use sgasket::{metric, oracle, Cell, Dyadic, PointAddress};

fn err(e: sgasket::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A `fractions.Fraction` from anything displayed as "p/q".
fn fraction<'py>(py: Python<'py>, x: impl ToString) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((x.to_string(),))
}

/// Read an int, a Fraction or a string as an exact rational.
fn rational(x: &Bound<'_, PyAny>) -> PyResult<BigRational> {
    parse_rational(&x.str()?.to_string()).map_err(err)
}

fn dyadic(x: &Bound<'_, PyAny>) -> PyResult<Dyadic> {
    Dyadic::from_rational(&rational(x)?).ok_or_else(|| PyValueError::new_err("expected a dyadic rational"))
}

#[pyclass(name = "PointAddress", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoint(PointAddress);

#[pymethods]
impl PyPoint {
    #[new]
    fn new(n: usize, word: Vec<u8>, tail: u8) -> PyResult<Self> {
        PointAddress::new(n, word, tail).map(PyPoint).map_err(err)
    }

    /// Parse "[w | t]".
    #[staticmethod]
    fn parse(n: usize, s: &str) -> PyResult<Self> {
        PointAddress::parse(n, s).map(PyPoint).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn word(&self) -> Vec<u8> {
        self.0.word().to_vec()
    }

    #[getter]
    fn tail(&self) -> u8 {
        self.0.tail()
    }

    fn canonical(&self) -> Self {
        PyPoint(self.0.canonicalize())
    }

    fn dual(&self) -> Option<Self> {
        self.0.dual_address().map(PyPoint)
    }

    fn barycentric<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.to_bary().coords().iter().map(|c| fraction(py, c)).collect()
    }

    fn __eq__(&self, other: PyRef<'_, PyPoint>) -> bool {
        self.0.same_point(&other.0)
    }

    fn __hash__(&self) -> u64 {
        use std::hash::{Hash, Hasher};
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.0.to_bary().hash(&mut h);
        h.finish()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("PointAddress({})", self.0)
    }
}

#[pyclass(name = "Cell", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCell(Cell);

#[pymethods]
impl PyCell {
    #[new]
    fn new(n: usize, word: Vec<u8>) -> PyResult<Self> {
        Cell::from_letters(n, word).map(PyCell).map_err(err)
    }

    #[staticmethod]
    fn parse(n: usize, s: &str) -> PyResult<Self> {
        Cell::parse(n, s).map(PyCell).map_err(err)
    }

    #[getter]
    fn level(&self) -> usize {
        self.0.level()
    }

    fn side<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.side())
    }

    fn corners(&self) -> Vec<PyPoint> {
        self.0.corners().into_iter().map(PyPoint).collect()
    }

    fn contains(&self, p: PyRef<'_, PyPoint>) -> bool {
        self.0.contains(&p.0)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Cell({})", self.0)
    }
}

#[pyclass(name = "Geodesic", frozen)]
struct PyGeodesic(metric::Geodesic);

#[pymethods]
impl PyGeodesic {
    #[getter]
    fn kind(&self) -> String {
        self.0.kind().to_string()
    }

    #[getter]
    fn waypoints(&self) -> Vec<PyPoint> {
        self.0.waypoints().iter().cloned().map(PyPoint).collect()
    }

    fn length<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.length())
    }

    /// The point at fraction `t` (dyadic) of the way along.
    fn point_along(&self, t: &Bound<'_, PyAny>) -> PyResult<PyPoint> {
        self.0.point_along(&dyadic(t)?).map(PyPoint).map_err(err)
    }

    fn __repr__(&self) -> String {
        let pts: Vec<String> = self.0.waypoints().iter().map(|p| p.to_string()).collect();
        format!("Geodesic({}: {})", self.0.kind(), pts.join(" -> "))
    }
}

#[pyclass(name = "CommonPath", frozen)]
struct PyCommonPath(interpolation::CommonPath);

#[pymethods]
impl PyCommonPath {
    #[getter]
    fn entry(&self) -> PyPoint {
        PyPoint(self.0.entry().clone())
    }

    #[getter]
    fn exit(&self) -> PyPoint {
        PyPoint(self.0.exit().clone())
    }

    fn length<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.length())
    }

    /// `(t1f, t2i)`: the times where the interpolants lie on the path.
    fn window<'py>(&self, py: Python<'py>) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        Ok((fraction(py, self.0.t1f())?, fraction(py, self.0.t2i())?))
    }

    /// `(start, end)` of the interpolant interval at `t`, as arclength from the entry.
    fn interval<'py>(
        &self,
        py: Python<'py>,
        t: &Bound<'_, PyAny>,
    ) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>)> {
        let iv = self.0.interpolant_interval(&rational(t)?).map_err(err)?;
        Ok((fraction(py, iv.x1.arclength)?, fraction(py, iv.x2.arclength)?))
    }

    /// Arclength of the interpolant of `a` and `b` at time `t`.
    fn z_t<'py>(
        &self,
        py: Python<'py>,
        t: &Bound<'_, PyAny>,
        a: PyRef<'_, PyPoint>,
        b: PyRef<'_, PyPoint>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let z = self.0.z_t(&rational(t)?, &a.0, &b.0).map_err(err)?;
        fraction(py, z.arclength)
    }
}

#[pyfunction]
fn distance<'py>(py: Python<'py>, x: PyRef<'_, PyPoint>, y: PyRef<'_, PyPoint>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, metric::distance(&x.0, &y.0).map_err(err)?)
}

#[pyfunction]
fn count_geodesics(x: PyRef<'_, PyPoint>, y: PyRef<'_, PyPoint>) -> PyResult<usize> {
    metric::count_geodesics(&x.0, &y.0).map_err(err)
}

#[pyfunction]
fn geodesics(x: PyRef<'_, PyPoint>, y: PyRef<'_, PyPoint>) -> PyResult<Vec<PyGeodesic>> {
    Ok(metric::enumerate_geodesics(&x.0, &y.0)
        .map_err(err)?
        .into_iter()
        .map(PyGeodesic)
        .collect())
}

#[pyfunction]
fn interpolate(x: PyRef<'_, PyPoint>, y: PyRef<'_, PyPoint>, t: &Bound<'_, PyAny>) -> PyResult<Vec<PyPoint>> {
    Ok(interpolation::interpolate_points(&x.0, &y.0, &dyadic(t)?)
        .map_err(err)?
        .into_iter()
        .map(PyPoint)
        .collect())
}

/// Common path from a cell to a cell or a point.
#[pyfunction]
fn common_path(a: PyRef<'_, PyCell>, b: &Bound<'_, PyAny>) -> PyResult<PyCommonPath> {
    let target = if let Ok(c) = b.cast::<PyCell>() {
        Target::Cell(c.get().0.clone())
    } else {
        Target::Point(b.cast::<PyPoint>()?.get().0.clone())
    };
    interpolation::build_common_path(&a.0, &target)
        .map(PyCommonPath)
        .map_err(err)
}

/// `ν_n([0, x])` for dyadic `x`.
#[pyfunction]
fn nu_cdf<'py>(py: Python<'py>, n: usize, x: &Bound<'_, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, SelfSimilarMeasure1D::standard(n).cdf(&dyadic(x)?).map_err(err)?)
}

#[pyfunction]
fn nu_histogram(n: usize, depth: u32) -> PyResult<Vec<f64>> {
    Ok(SelfSimilarMeasure1D::standard(n)
        .histogram(depth)
        .map_err(err)?
        .masses_f64())
}

/// Histogram of `ν̃_n^t` on `2^depth` bins by grid pushforward or transfer operator.
#[pyfunction]
#[pyo3(signature = (n, t, k, m, depth, method = "grid"))]
fn tilde_nu_histogram(n: usize, t: &Bound<'_, PyAny>, k: usize, m: usize, depth: u32, method: &str) -> PyResult<Vec<f64>> {
    let spec = PushforwardSpec::standard(n, rational(t)?, k, m).map_err(err)?;
    let h = match method {
        "grid" => measures::tilde_nu_histogram_grid(&spec, depth).map_err(err)?,
        "ifs" => measures::tilde_nu_histogram_ifs(&spec, depth, 2000, 1e-14).map_err(err)?.0,
        other => return Err(PyValueError::new_err(format!("unknown method {other:?}"))),
    };
    Ok(h.masses_f64())
}

#[pyfunction]
fn nu_dimension(n: usize) -> f64 {
    measures::nu_dimension(n)
}

#[pyfunction]
fn phi(n: usize, x: f64) -> PyResult<f64> {
    inequality::phi(n, x).map_err(err)
}

/// `(passed, slack)` for the inequality between two cells at time `t`.
#[pyfunction]
fn check_cell_inequality(a: PyRef<'_, PyCell>, b: PyRef<'_, PyCell>, t: &Bound<'_, PyAny>) -> PyResult<(bool, f64)> {
    let r = inequality::check_cell_inequality(&a.0, &b.0, &rational(t)?).map_err(err)?;
    Ok((r.passed, r.slack))
}

/// `(passed, max_count)` from comparing closed-form distances with the level-m graph.
#[pyfunction]
fn verify_metric(py: Python<'_>, n: usize, m: usize) -> PyResult<(bool, u128)> {
    let r = py.detach(|| oracle::verify_metric(n, m)).map_err(err)?;
    Ok((r.passed(), r.max_count))
}

#[pymodule(name = "sgasket")]
fn sgasket_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoint>()?;
    m.add_class::<PyCell>()?;
    m.add_class::<PyGeodesic>()?;
    m.add_class::<PyCommonPath>()?;
    m.add_function(wrap_pyfunction!(distance, m)?)?;
    m.add_function(wrap_pyfunction!(count_geodesics, m)?)?;
    m.add_function(wrap_pyfunction!(geodesics, m)?)?;
    m.add_function(wrap_pyfunction!(interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(common_path, m)?)?;
    m.add_function(wrap_pyfunction!(nu_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(nu_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(tilde_nu_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(nu_dimension, m)?)?;
    m.add_function(wrap_pyfunction!(phi, m)?)?;
    m.add_function(wrap_pyfunction!(check_cell_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(verify_metric, m)?)?;
    Ok(())
}
