//! Python bindings for `simstoq`.
//!
//! Matrices cross the boundary as lists of rows of Python complex numbers.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use simstoq::bloch::{self, BlochVector};
use simstoq::certificates::{self, AnalysisConfig};
use simstoq::curing::{self, CuringConfig};
use simstoq::invariants::{self, Word};
use simstoq::io::{self as sio, HamiltonianSetFile};
use simstoq::linalg::{self, ComplexMatrix, HermitianMatrix};
use simstoq::su_basis::{self, structure_constants_analytic};
use simstoq::{Complex64, Tolerances};

type Rows = Vec<Vec<Complex64>>;
type Entry = ((usize, usize, usize), f64);

fn py_err(e: simstoq::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_matrix(rows: &Rows) -> PyResult<ComplexMatrix> {
    let d = rows.len();
    let data: Vec<Complex64> = rows.iter().flatten().copied().collect();
    if rows.iter().any(|r| r.len() != d) {
        return Err(PyValueError::new_err(format!("expected a square {d}x{d} matrix")));
    }
    ComplexMatrix::new(d, data).map_err(py_err)
}

fn to_hermitian(rows: &Rows) -> PyResult<HermitianMatrix> {
    let m = to_matrix(rows)?;
    HermitianMatrix::with_tolerance(m.clone(), sio::FILE_HERMITICITY_TOL).map_err(py_err)?;
    Ok(HermitianMatrix::hermitize(&m))
}

fn to_set(set: &[Rows]) -> PyResult<Vec<HermitianMatrix>> {
    set.iter().map(to_hermitian).collect()
}

fn to_rows(m: &ComplexMatrix) -> Rows {
    m.rows().map(<[Complex64]>::to_vec).collect()
}

fn basis_for(d: usize) -> PyResult<su_basis::GellMannBasis> {
    su_basis::build_basis(d).map_err(py_err)
}

/// Generalized Gell-Mann basis of su(d).
#[pyclass(frozen)]
struct GellMannBasis {
    inner: su_basis::GellMannBasis,
}

#[pymethods]
impl GellMannBasis {
    #[new]
    fn new(d: usize) -> PyResult<Self> {
        Ok(Self { inner: basis_for(d)? })
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.index_map().labels().iter().map(ToString::to_string).collect()
    }

    /// Element at 0-based position `pos`.
    fn element(&self, pos: usize) -> PyResult<Rows> {
        if pos >= self.inner.len() {
            return Err(PyValueError::new_err(format!("position {pos} out of range")));
        }
        Ok(to_rows(self.inner.element(pos).as_matrix()))
    }

    fn combine(&self, coeffs: Vec<f64>) -> PyResult<Rows> {
        Ok(to_rows(self.inner.combine(&coeffs).map_err(py_err)?.as_matrix()))
    }

    /// Nonzero symmetric structure constants as ((i, j, k), value), 1-based.
    fn symmetric_constants(&self) -> PyResult<Vec<Entry>> {
        let table = structure_constants_analytic(self.inner.dim()).map_err(py_err)?;
        Ok(table.sym_entries().map(|([i, j, k], v)| ((i, j, k), v)).collect())
    }

    /// Largest difference between the closed-form table and the trace oracle.
    fn check_constants(&self) -> PyResult<f64> {
        let table = structure_constants_analytic(self.inner.dim()).map_err(py_err)?;
        let oracle = su_basis::structure_constants_trace(&self.inner).map_err(py_err)?;
        Ok(table.max_sym_difference(&oracle))
    }
}

/// Outcome of the curing search.
#[pyclass(frozen, get_all)]
struct CuringResult {
    found: bool,
    theta: Vec<f64>,
    unitary: Rows,
    transformed: Vec<Rows>,
    penalty: f64,
    max_violation: f64,
    restarts_used: usize,
    iterations_total: usize,
    note: String,
}

impl From<&curing::CuringResult> for CuringResult {
    fn from(r: &curing::CuringResult) -> Self {
        Self {
            found: r.found,
            theta: r.theta.clone(),
            unitary: to_rows(r.unitary().as_matrix()),
            transformed: r.transformed.iter().map(|h| to_rows(h.as_matrix())).collect(),
            penalty: r.penalty,
            max_violation: r.max_violation,
            restarts_used: r.restarts_used,
            iterations_total: r.iterations_total,
            note: r.note.clone(),
        }
    }
}

/// Verdict plus the full certificate as JSON.
#[pyclass(frozen, get_all)]
struct Certificate {
    verdict: String,
    exit_code: i32,
    curing: Option<Py<CuringResult>>,
    json: String,
}

#[pyfunction]
#[pyo3(signature = (hamiltonians, restarts = 50, seed = 0, tol = 1e-10, cure = true))]
fn analyze(
    py: Python<'_>,
    hamiltonians: Vec<Rows>,
    restarts: usize,
    seed: u64,
    tol: f64,
    cure: bool,
) -> PyResult<Certificate> {
    let set = to_set(&hamiltonians)?;
    let d = set.first().map_or(0, HermitianMatrix::dim);
    let basis = basis_for(d)?;
    let table = structure_constants_analytic(d).map_err(py_err)?;
    let config = AnalysisConfig {
        tolerances: Tolerances { stoquastic: tol, ..Tolerances::default() },
        curing: CuringConfig { restarts, seed, ..CuringConfig::default() },
        run_curing: cure,
        cure_after_nogo: false,
    };
    let cert = py.detach(|| certificates::analyze(&set, &basis, &table, &config)).map_err(py_err)?;
    let curing = cert.curing.as_ref().map(|c| Py::new(py, CuringResult::from(c))).transpose()?;
    Ok(Certificate {
        verdict: format!("{:?}", cert.verdict),
        exit_code: cert.verdict.exit_code(),
        curing,
        json: sio::to_json_string(&cert).map_err(py_err)?,
    })
}

#[pyfunction]
#[pyo3(signature = (hamiltonians, restarts = 50, seed = 0))]
fn cure(py: Python<'_>, hamiltonians: Vec<Rows>, restarts: usize, seed: u64) -> PyResult<CuringResult> {
    let set: Vec<HermitianMatrix> = to_set(&hamiltonians)?.iter().map(|h| h.traceless_part().0).collect();
    let basis = basis_for(set.first().map_or(0, HermitianMatrix::dim))?;
    let config = CuringConfig { restarts, seed, ..CuringConfig::default() };
    let r = py.detach(|| curing::cure_search(&set, &config, &basis)).map_err(py_err)?;
    Ok(CuringResult::from(&r))
}

#[pyfunction]
#[pyo3(signature = (h, tol = 0.0))]
fn is_stoquastic(h: Rows, tol: f64) -> PyResult<bool> {
    Ok(certificates::is_stoquastic(&to_hermitian(&h)?, tol))
}

#[pyfunction]
fn stoq_penalty(hamiltonians: Vec<Rows>) -> PyResult<f64> {
    Ok(curing::stoq_penalty(&to_set(&hamiltonians)?))
}

/// Eigenvalues (ascending) and eigenvectors as columns.
#[pyfunction]
fn eigh(h: Rows) -> PyResult<(Vec<f64>, Rows)> {
    let eig = linalg::hermitian_eigensystem(&to_hermitian(&h)?).map_err(py_err)?;
    Ok((eig.eigenvalues.clone(), to_rows(eig.eigenvectors.as_matrix())))
}

#[pyfunction]
fn unitary_from_generator(theta: Vec<f64>, d: usize) -> PyResult<Rows> {
    let u = linalg::unitary_from_generator(&theta, &basis_for(d)?).map_err(py_err)?;
    Ok(to_rows(u.as_matrix()))
}

#[pyfunction]
fn to_bloch(h: Rows) -> PyResult<Vec<f64>> {
    let h = to_hermitian(&h)?;
    let b = bloch::to_bloch(&h, &basis_for(h.dim())?).map_err(py_err)?;
    Ok(b.into_components())
}

#[pyfunction]
fn from_bloch(v: Vec<f64>, d: usize) -> PyResult<Rows> {
    let b = BlochVector::new(d, v).map_err(py_err)?;
    Ok(to_rows(bloch::from_bloch(&b, &basis_for(d)?).map_err(py_err)?.as_matrix()))
}

#[pyfunction]
fn star(a: Vec<f64>, b: Vec<f64>, d: usize) -> PyResult<Vec<f64>> {
    let table = structure_constants_analytic(d).map_err(py_err)?;
    let a = BlochVector::new(d, a).map_err(py_err)?;
    let b = BlochVector::new(d, b).map_err(py_err)?;
    Ok(bloch::star(&a, &b, &table).map_err(py_err)?.into_components())
}

/// Dimension of the star closure of the members' Bloch vectors.
#[pyfunction]
#[pyo3(signature = (hamiltonians, rel_tol = 1e-8))]
fn closure_rank(hamiltonians: Vec<Rows>, rel_tol: f64) -> PyResult<usize> {
    let set = to_set(&hamiltonians)?;
    let d = set.first().map_or(0, HermitianMatrix::dim);
    let basis = basis_for(d)?;
    let table = structure_constants_analytic(d).map_err(py_err)?;
    let vectors = set.iter().map(|h| bloch::to_bloch(h, &basis)).collect::<simstoq::Result<Vec<_>>>().map_err(py_err)?;
    Ok(bloch::star_closure(&vectors, &table, rel_tol).map_err(py_err)?.rank)
}

/// Canonical words (0-based letters) of length 2..=cap.
#[pyfunction]
fn enumerate_words(m: usize, cap: usize) -> Vec<Vec<usize>> {
    invariants::enumerate_words(m, cap).iter().map(|w| w.letters().to_vec()).collect()
}

#[pyfunction]
fn word_trace(hamiltonians: Vec<Rows>, letters: Vec<usize>) -> PyResult<Complex64> {
    let set = to_set(&hamiltonians)?;
    let word = Word::new(letters, set.len()).map_err(py_err)?;
    invariants::word_trace(&set, &word).map_err(py_err)
}

/// (c, n, l_max) for m matrices of size d.
#[pyfunction]
fn max_word_length(m: usize, d: usize) -> (usize, usize, usize) {
    let b = invariants::max_word_length(m, d);
    (b.c, b.n, b.l_max)
}

/// Random set of kind "gue", "stoquastic" or "planted".
#[pyfunction]
#[pyo3(signature = (d, m, kind = "gue", seed = 0))]
fn random_set(d: usize, m: usize, kind: &str, seed: u64) -> PyResult<Vec<Rows>> {
    let set = match kind {
        "gue" => linalg::random_gue_set(d, m, seed),
        "stoquastic" => curing::random_stoquastic_set(d, m, seed),
        "planted" => curing::plant_instance(d, m, seed, &basis_for(d)?).map(|p| p.hamiltonians),
        other => return Err(PyValueError::new_err(format!("unknown kind `{other}`"))),
    }
    .map_err(py_err)?;
    Ok(set.iter().map(|h| to_rows(h.as_matrix())).collect())
}

#[pyfunction]
fn load_set(path: std::path::PathBuf) -> PyResult<Vec<Rows>> {
    let (_, set, _) = sio::load_set(&path).map_err(py_err)?;
    Ok(set.iter().map(|h| to_rows(h.as_matrix())).collect())
}

#[pyfunction]
fn dump_set(hamiltonians: Vec<Rows>) -> PyResult<String> {
    let set = to_set(&hamiltonians)?;
    HamiltonianSetFile::from_set(&set, None).and_then(|f| f.to_json()).map_err(py_err)
}

#[pymodule]
fn simstoq_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<GellMannBasis>()?;
    m.add_class::<CuringResult>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(cure, m)?)?;
    m.add_function(wrap_pyfunction!(is_stoquastic, m)?)?;
    m.add_function(wrap_pyfunction!(stoq_penalty, m)?)?;
    m.add_function(wrap_pyfunction!(eigh, m)?)?;
    m.add_function(wrap_pyfunction!(unitary_from_generator, m)?)?;
    m.add_function(wrap_pyfunction!(to_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(from_bloch, m)?)?;
    m.add_function(wrap_pyfunction!(star, m)?)?;
    m.add_function(wrap_pyfunction!(closure_rank, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate_words, m)?)?;
    m.add_function(wrap_pyfunction!(word_trace, m)?)?;
    m.add_function(wrap_pyfunction!(max_word_length, m)?)?;
    m.add_function(wrap_pyfunction!(random_set, m)?)?;
    m.add_function(wrap_pyfunction!(load_set, m)?)?;
    m.add_function(wrap_pyfunction!(dump_set, m)?)?;
    Ok(())
}
