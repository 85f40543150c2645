//! Python bindings: matrices, designs, verification, the catalog and the
//! file formats.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use cretan::catalog::{self, Catalog, DiffKind};
use cretan::cretan as cm;
use cretan::designs::{self, Sbibd};
use cretan::hadamard;
use cretan::io::fixture::FixtureStore;
use cretan::io::matrix_file;
use cretan::io::render::{self, ImageFormat, RenderStyle};
use cretan::scalar::{self, VERIFY_TOL};
use cretan::verify::{self, VerifyMode};

create_exception!(
    pycretan,
    CretanError,
    PyValueError,
    "Any failure reported by the library."
);
create_exception!(
    pycretan,
    MissingFixtureError,
    CretanError,
    "A construction needs an absent fixture."
);

fn py_err(e: cretan::CretanError) -> PyErr {
    match e {
        cretan::CretanError::MissingFixture(_) => MissingFixtureError::new_err(e.to_string()),
        other => CretanError::new_err(other.to_string()),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for cretan::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn store(fixture_dir: Option<PathBuf>) -> FixtureStore {
    match fixture_dir {
        Some(d) => FixtureStore::from_dir(&d),
        None => FixtureStore::from_env(),
    }
}

fn image_format(format: &str) -> PyResult<ImageFormat> {
    match format {
        "svg" => Ok(ImageFormat::Svg),
        "pgm" => Ok(ImageFormat::Pgm),
        other => Err(CretanError::new_err(format!("unknown image format `{other}`"))),
    }
}

/// Exact quadratic-field number `(p + q sqrt(d)) / r`, or a float.
#[pyclass(frozen, eq, skip_from_py_object, name = "Scalar")]
#[derive(Clone, PartialEq)]
struct PyScalar(scalar::Scalar);

#[pymethods]
impl PyScalar {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        text.parse().map(PyScalar).map_err(py_err)
    }

    fn __float__(&self) -> f64 {
        self.0.to_f64()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Scalar('{}')", self.0)
    }

    #[getter]
    fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    fn __add__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        self.0.try_add(&other.0).py().map(PyScalar)
    }

    fn __sub__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        self.0.try_sub(&other.0).py().map(PyScalar)
    }

    fn __mul__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        self.0.try_mul(&other.0).py().map(PyScalar)
    }

    fn __truediv__(&self, other: &PyScalar) -> PyResult<PyScalar> {
        self.0.try_div(&other.0).py().map(PyScalar)
    }
}

/// Roots of `c0 + c1 x + c2 x^2`, ascending.
#[pyfunction]
fn solve_quadratic(c0: &PyScalar, c1: &PyScalar, c2: &PyScalar) -> PyResult<Vec<PyScalar>> {
    Ok(scalar::solve_quadratic(&c0.0, &c1.0, &c2.0)
        .py()?
        .into_iter()
        .map(PyScalar)
        .collect())
}

#[pyclass(frozen, name = "Certificate")]
struct PyCertificate(verify::Certificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn passed(&self) -> bool {
        self.0.passed
    }
    #[getter]
    fn strict(&self) -> bool {
        self.0.strict
    }
    #[getter]
    fn relaxed(&self) -> bool {
        self.0.relaxed
    }
    #[getter]
    fn radius(&self) -> PyScalar {
        PyScalar(self.0.radius.clone())
    }
    #[getter]
    fn omega_matches(&self) -> bool {
        self.0.omega_matches
    }
    #[getter]
    fn tau(&self) -> usize {
        self.0.tau
    }
    #[getter]
    fn gram_exact_zero(&self) -> bool {
        self.0.gram_exact_zero
    }
    #[getter]
    fn max_offdiag_residual(&self) -> f64 {
        self.0.max_offdiag_residual
    }
    #[getter]
    fn det_relative_residual(&self) -> f64 {
        self.0.det.relative_residual
    }
    #[getter]
    fn radius_within_order(&self) -> bool {
        self.0.radius_within_order
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(order={}, radius={}, passed={}, strict={})",
            self.0.order, self.0.radius, self.0.passed, self.0.strict
        )
    }
}

/// Orthogonal matrix with entries drawn from a few levels of modulus at most 1.
#[pyclass(frozen, skip_from_py_object, name = "LevelMatrix")]
#[derive(Clone)]
struct PyLevelMatrix(cm::LevelMatrix);

#[pymethods]
impl PyLevelMatrix {
    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }
    #[getter]
    fn tau(&self) -> usize {
        self.0.tau()
    }
    #[getter]
    fn omega(&self) -> PyScalar {
        PyScalar(self.0.omega().clone())
    }
    #[getter]
    fn levels(&self) -> Vec<PyScalar> {
        self.0.levels().iter().cloned().map(PyScalar).collect()
    }
    #[getter]
    fn method(&self) -> String {
        self.0.method().to_string()
    }
    #[getter]
    fn params(&self) -> BTreeMap<String, String> {
        self.0.provenance().params.iter().cloned().collect()
    }
    #[getter]
    fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    /// Row-major nested lists of floats.
    fn to_list(&self) -> Vec<Vec<f64>> {
        let n = self.0.order();
        let flat = self.0.to_f64();
        flat.chunks(n).map(<[f64]>::to_vec).collect()
    }

    #[pyo3(signature = (strict = false, tolerance = VERIFY_TOL))]
    fn verify(&self, strict: bool, tolerance: f64) -> PyCertificate {
        let mode = if strict {
            VerifyMode::Strict
        } else {
            VerifyMode::Relaxed
        };
        PyCertificate(verify::verify_cretan(&self.0, mode, tolerance))
    }

    fn to_text(&self) -> String {
        matrix_file::MatrixFile::Level(self.0.clone()).to_text()
    }

    #[pyo3(signature = (format = "svg", cell = 16))]
    fn render(&self, format: &str, cell: u32) -> PyResult<String> {
        let style = RenderStyle { cell, grid: true };
        Ok(render::render(
            &matrix_file::MatrixFile::Level(self.0.clone()),
            image_format(format)?,
            style,
        ))
    }

    fn kron(&self, other: &PyLevelMatrix) -> PyLevelMatrix {
        PyLevelMatrix(cm::kronecker_cretan(&self.0, &other.0))
    }

    fn __repr__(&self) -> String {
        format!(
            "LevelMatrix(order={}, tau={}, omega={}, method='{}')",
            self.0.order(),
            self.0.tau(),
            self.0.omega(),
            self.0.method()
        )
    }
}

/// Matrix file in any mode: exact, float, complex or group.
#[pyclass(frozen, name = "MatrixFile")]
struct PyMatrixFile(matrix_file::MatrixFile);

#[pymethods]
impl PyMatrixFile {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        matrix_file::MatrixFile::parse(text).py().map(PyMatrixFile)
    }

    #[getter]
    fn mode(&self) -> &'static str {
        self.0.mode()
    }
    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }
    #[getter]
    fn method(&self) -> String {
        self.0.provenance().method.clone()
    }

    /// The level matrix, or None for complex and group files.
    fn level(&self) -> Option<PyLevelMatrix> {
        match &self.0 {
            matrix_file::MatrixFile::Level(m) => Some(PyLevelMatrix(m.clone())),
            _ => None,
        }
    }

    /// Orthogonality check appropriate to the mode.
    #[pyo3(signature = (strict = false, tolerance = VERIFY_TOL))]
    fn verify(&self, strict: bool, tolerance: f64) -> bool {
        match &self.0 {
            matrix_file::MatrixFile::Level(m) => {
                let mode = if strict {
                    VerifyMode::Strict
                } else {
                    VerifyMode::Relaxed
                };
                verify::verify_cretan(m, mode, tolerance).passed
            }
            matrix_file::MatrixFile::Complex(m) => m.gram_residual() < tolerance,
            matrix_file::MatrixFile::Group { matrix, .. } => cm::group_orthogonality_check(matrix).passed,
        }
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[pyo3(signature = (format = "svg", cell = 16))]
    fn render(&self, format: &str, cell: u32) -> PyResult<String> {
        Ok(render::render(
            &self.0,
            image_format(format)?,
            RenderStyle { cell, grid: true },
        ))
    }

    fn __repr__(&self) -> String {
        format!("MatrixFile(mode='{}', order={})", self.0.mode(), self.0.order())
    }
}

/// Symmetric design developed from a difference set.
#[pyclass(frozen, name = "Design")]
struct PyDesign(Sbibd);

#[pymethods]
impl PyDesign {
    #[staticmethod]
    fn qr(q: u64) -> PyResult<Self> {
        Ok(PyDesign(designs::develop(&designs::qr_difference_set(q).py()?)))
    }

    #[staticmethod]
    fn singer(n: u32, q: u64) -> PyResult<Self> {
        Ok(PyDesign(designs::develop(&designs::singer_difference_set(n, q).py()?)))
    }

    #[staticmethod]
    #[pyo3(signature = (p, with_zero = false))]
    fn biquadratic(p: u64, with_zero: bool) -> PyResult<Self> {
        Ok(PyDesign(designs::develop(
            &designs::biquadratic_difference_set(p, with_zero).py()?,
        )))
    }

    /// The built-in design of order `v`.
    #[staticmethod]
    #[pyo3(signature = (v, fixture_dir = None))]
    fn registry(v: u64, fixture_dir: Option<PathBuf>) -> PyResult<Self> {
        let entry = designs::registry_entry(v)
            .ok_or_else(|| CretanError::new_err(format!("no built-in design of order {v}")))?;
        Ok(PyDesign(designs::develop(&entry.build(&store(fixture_dir)).py()?)))
    }

    #[getter]
    fn params(&self) -> (usize, usize, usize) {
        self.0.params()
    }

    fn incidence(&self) -> Vec<Vec<u8>> {
        let v = self.0.v();
        self.0.incidence().chunks(v).map(<[u8]>::to_vec).collect()
    }

    fn complement(&self) -> PyDesign {
        PyDesign(self.0.complement())
    }

    fn __repr__(&self) -> String {
        let (v, k, l) = self.0.params();
        format!("Design({v}, {k}, {l})")
    }
}

fn wrap(ms: Vec<cm::LevelMatrix>) -> Vec<PyLevelMatrix> {
    ms.into_iter().map(PyLevelMatrix).collect()
}

#[pyfunction]
fn basic_family(n: usize) -> PyResult<PyLevelMatrix> {
    cm::basic_family(n).py().map(PyLevelMatrix)
}

#[pyfunction]
fn sbibd_two_level(design: &PyDesign) -> PyResult<Vec<PyLevelMatrix>> {
    cm::sbibd_two_level(&design.0).py().map(wrap)
}

#[pyfunction]
fn bordered_solver(design: &PyDesign) -> PyResult<Vec<PyLevelMatrix>> {
    cm::bordered_solver(&design.0).py().map(wrap)
}

/// Bordered regular Hadamard matrix of order `4m^2 + 1`.
#[pyfunction]
#[pyo3(signature = (m, fixture_dir = None))]
fn regular_hadamard_border(m: usize, fixture_dir: Option<PathBuf>) -> PyResult<PyLevelMatrix> {
    let h = hadamard::regular_hadamard(m, &store(fixture_dir)).py()?;
    cm::regular_hadamard_border(&h).py().map(PyLevelMatrix)
}

#[pyfunction]
fn kronecker(a: &PyLevelMatrix, b: &PyLevelMatrix) -> PyLevelMatrix {
    PyLevelMatrix(cm::kronecker_cretan(&a.0, &b.0))
}

#[pyfunction]
fn direct_sum(a: &PyLevelMatrix, b: &PyLevelMatrix) -> PyLevelMatrix {
    PyLevelMatrix(cm::direct_sum(&a.0, &b.0))
}

/// One matrix of order `n` by a named method (see `construct_methods`).
#[pyfunction]
#[pyo3(signature = (n, method = "auto", fixture_dir = None))]
fn construct(n: usize, method: &str, fixture_dir: Option<PathBuf>) -> PyResult<PyMatrixFile> {
    Catalog::new(store(fixture_dir))
        .construct(n, method)
        .py()
        .map(PyMatrixFile)
}

#[pyfunction]
fn construct_methods() -> Vec<&'static str> {
    catalog::CONSTRUCT_METHODS.to_vec()
}

#[pyfunction]
#[pyo3(signature = (v, fixture_dir = None))]
fn methods_for(v: usize, fixture_dir: Option<PathBuf>) -> PyResult<Vec<String>> {
    Ok(catalog::methods_for(v, &store(fixture_dir))
        .py()?
        .iter()
        .map(catalog::Method::label)
        .collect())
}

/// `(order, best method, tau, omega, published label)` for each odd order.
#[pyfunction]
#[pyo3(signature = (v_max = 199, fixture_dir = None))]
fn catalog_rows(v_max: usize, fixture_dir: Option<PathBuf>) -> PyResult<Vec<(usize, String, usize, f64, String)>> {
    let t = catalog::catalog_table(v_max, &store(fixture_dir)).py()?;
    Ok(t.rows
        .iter()
        .filter_map(|r| {
            r.best
                .as_ref()
                .map(|b| (r.order, b.method.clone(), b.tau, b.omega, r.paper.text().to_string()))
        })
        .collect())
}

/// Orders per comparison outcome against the published tables.
#[pyfunction]
#[pyo3(signature = (v_max = 199, fixture_dir = None))]
fn catalog_diff(v_max: usize, fixture_dir: Option<PathBuf>) -> PyResult<BTreeMap<String, Vec<(String, usize)>>> {
    let t = catalog::catalog_table(v_max, &store(fixture_dir)).py()?;
    let mut out = BTreeMap::new();
    for kind in [
        DiffKind::Agree,
        DiffKind::Substituted,
        DiffKind::OurExtra,
        DiffKind::PaperExtra,
        DiffKind::Conflict,
    ] {
        let items = t.diff.of_kind(kind).map(|i| (i.table.to_string(), i.order)).collect();
        out.insert(format!("{kind:?}"), items);
    }
    Ok(out)
}

/// Full catalog as JSON text.
#[pyfunction]
#[pyo3(signature = (v_max = 199, fixture_dir = None))]
fn catalog_json(v_max: usize, fixture_dir: Option<PathBuf>) -> PyResult<String> {
    let t = catalog::catalog_table(v_max, &store(fixture_dir)).py()?;
    serde_json::to_string(&t).map_err(|e| CretanError::new_err(e.to_string()))
}

/// Determinant bounds for order `n`; values are None when they overflow.
#[pyfunction]
fn det_bounds(n: usize) -> BTreeMap<&'static str, Option<f64>> {
    let b = verify::det_bounds(n);
    BTreeMap::from([
        ("hadamard", b.hadamard.value),
        ("barba", b.barba.and_then(|x| x.value)),
        ("wojtas", b.wojtas.and_then(|x| x.value)),
        ("brent_osborn", b.brent_osborn.value),
    ])
}

#[pymodule]
fn pycretan(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("CretanError", m.py().get_type::<CretanError>())?;
    m.add("MissingFixtureError", m.py().get_type::<MissingFixtureError>())?;
    m.add("VERIFY_TOL", VERIFY_TOL)?;
    m.add_class::<PyScalar>()?;
    m.add_class::<PyLevelMatrix>()?;
    m.add_class::<PyMatrixFile>()?;
    m.add_class::<PyDesign>()?;
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(solve_quadratic, m)?)?;
    m.add_function(wrap_pyfunction!(basic_family, m)?)?;
    m.add_function(wrap_pyfunction!(sbibd_two_level, m)?)?;
    m.add_function(wrap_pyfunction!(bordered_solver, m)?)?;
    m.add_function(wrap_pyfunction!(regular_hadamard_border, m)?)?;
    m.add_function(wrap_pyfunction!(kronecker, m)?)?;
    m.add_function(wrap_pyfunction!(direct_sum, m)?)?;
    m.add_function(wrap_pyfunction!(construct, m)?)?;
    m.add_function(wrap_pyfunction!(construct_methods, m)?)?;
    m.add_function(wrap_pyfunction!(methods_for, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_rows, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_diff, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(det_bounds, m)?)?;
    Ok(())
}
