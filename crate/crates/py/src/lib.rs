//! Python bindings. Counts and other big integers cross as Python `int`;
//! rationals cross as `"p/q"` strings.

use num_bigint::{BigInt, BigUint};
use persym::census as core_census;
use persym::closedform;
use persym::fitting;
use persym::identities::{self, Source};
use persym::poly::{rat_string, RatPoly};
use persym::polysys;
use persym::Error;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(
    persym,
    BudgetError,
    PyException,
    "Enumeration exceeds its size ceiling."
);
create_exception!(
    persym,
    InconsistentError,
    PyException,
    "An exact identity or system failed."
);

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Budget { .. } => BudgetError::new_err(err.to_string()),
        Error::Inconsistent(_) | Error::NonIntegral(_) => {
            InconsistentError::new_err(err.to_string())
        }
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn parse_source(s: &str) -> PyResult<Source> {
    match s {
        "census" => Ok(Source::Census),
        "closedform" => Ok(Source::ClosedForm),
        _ => Err(PyValueError::new_err(format!("unknown source {s:?}"))),
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Number of tuples of each rank for fixed `n`, `k`.
#[pyclass(
    name = "RankDistribution",
    module = "persym",
    frozen,
    skip_from_py_object
)]
#[derive(Clone)]
struct PyRankDistribution {
    inner: core_census::RankDistribution,
}

#[pymethods]
impl PyRankDistribution {
    #[new]
    fn new(n: usize, k: usize, counts: Vec<BigUint>) -> PyResult<Self> {
        core_census::RankDistribution::new(n, k, counts)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k
    }

    #[getter]
    fn counts(&self) -> Vec<BigUint> {
        self.inner.counts.clone()
    }

    fn total(&self) -> BigUint {
        self.inner.total()
    }

    fn max_rank(&self) -> usize {
        self.inner.max_rank()
    }

    fn __getitem__(&self, i: usize) -> BigUint {
        self.inner.get(i)
    }

    fn __len__(&self) -> usize {
        self.inner.counts.len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let counts: Vec<String> = self.inner.counts.iter().map(|c| c.to_string()).collect();
        format!(
            "RankDistribution(n={}, k={}, counts=[{}])",
            self.inner.n,
            self.inner.k,
            counts.join(", ")
        )
    }
}

/// Coefficient tuple of `n` blocks, each holding `a_1..a_{k+1}`.
#[pyclass(name = "CoeffTuple", module = "persym", frozen)]
struct PyCoeffTuple {
    inner: persym::CoeffTuple,
}

#[pymethods]
impl PyCoeffTuple {
    /// From a flat list of `n(k+1)` bits, block by block.
    #[new]
    fn new(n: usize, k: usize, bits: Vec<u8>) -> PyResult<Self> {
        persym::CoeffTuple::from_bits(n, k, &bits)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_index(index: BigUint, n: usize, k: usize) -> PyResult<Self> {
        persym::CoeffTuple::from_index(&index, n, k)
            .map(|inner| Self { inner })
            .map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    fn index(&self) -> BigUint {
        self.inner.index()
    }

    /// `alpha_i^{(j)}`, both 1-based.
    fn alpha(&self, j: usize, i: usize) -> bool {
        self.inner.alpha(j, i)
    }

    /// The `2n x k` matrix as lists of 0/1.
    fn matrix(&self) -> Vec<Vec<u32>> {
        let m = self.inner.matrix();
        (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| u32::from(m.get(r, c))).collect())
            .collect()
    }

    fn rank(&self) -> usize {
        self.inner.matrix().rank()
    }
}

/// Rank distribution by exhaustive enumeration.
#[pyfunction]
#[pyo3(signature = (n, k, workers=None, force=false))]
fn census(
    py: Python<'_>,
    n: usize,
    k: usize,
    workers: Option<usize>,
    force: bool,
) -> PyResult<PyRankDistribution> {
    let workers = workers.unwrap_or_else(default_workers).max(1);
    py.detach(|| {
        if force {
            core_census::census_forced(n, k, workers)
        } else {
            core_census::census(n, k, workers)
        }
    })
    .map(|inner| PyRankDistribution { inner })
    .map_err(to_py)
}

#[pyfunction]
fn census_naive(py: Python<'_>, n: usize, k: usize) -> PyResult<PyRankDistribution> {
    py.detach(|| core_census::census_naive(n, k))
        .map(|inner| PyRankDistribution { inner })
        .map_err(to_py)
}

#[pyfunction]
fn gamma_general(i: usize, n: usize, k: usize) -> PyResult<BigInt> {
    closedform::gamma_general(i, n, k).map_err(to_py)
}

#[pyfunction]
fn gamma_k10(i: usize, n: usize) -> BigInt {
    closedform::gamma_k10(i, n)
}

#[pyfunction]
fn closedform_distribution(n: usize, k: usize) -> PyResult<PyRankDistribution> {
    closedform::closedform_distribution(n, k)
        .map(|inner| PyRankDistribution { inner })
        .map_err(to_py)
}

#[pyfunction]
fn r_qnk(q: usize, n: usize, k: usize, gammas: &PyRankDistribution) -> PyResult<BigInt> {
    identities::r_qnk(q, n, k, &gammas.inner).map_err(to_py)
}

#[pyfunction]
fn count_solutions_bruteforce(py: Python<'_>, q: usize, n: usize, k: usize) -> PyResult<BigUint> {
    py.detach(|| polysys::count_solutions_bruteforce(q, n, k))
        .map_err(to_py)
}

#[pyfunction]
fn count_solutions_marginalized(py: Python<'_>, q: usize, n: usize, k: usize) -> PyResult<BigUint> {
    py.detach(|| polysys::count_solutions_marginalized(q, n, k))
        .map_err(to_py)
}

/// Moment checks as a list of `(name, lhs, rhs, passed)`.
#[pyfunction]
#[pyo3(signature = (n, k, source="census"))]
fn verify_moments(
    py: Python<'_>,
    n: usize,
    k: usize,
    source: &str,
) -> PyResult<Vec<(String, String, String, bool)>> {
    let source = parse_source(source)?;
    let report = py
        .detach(|| identities::verify_moments(n, k, source))
        .map_err(to_py)?;
    Ok(report
        .checks
        .into_iter()
        .map(|c| {
            (
                c.name.to_string(),
                rat_string(&c.lhs),
                rat_string(&c.rhs),
                c.pass,
            )
        })
        .collect())
}

fn coeffs(p: &RatPoly) -> Vec<String> {
    p.coeffs().iter().map(rat_string).collect()
}

/// Fitted rank-7 coefficients, each a list of `"p/q"` strings ascending in `2^k`.
#[pyfunction]
fn fit_gamma7(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let fit = fitting::fit_gamma7().map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("alpha", coeffs(&fit.alpha))?;
    d.set_item("beta", coeffs(&fit.beta))?;
    d.set_item("gamma", coeffs(&fit.gamma))?;
    for (name, p) in ["a", "b", "c", "d", "e", "f", "g"].iter().zip(&fit.coeffs) {
        d.set_item(*name, coeffs(p))?;
    }
    Ok(d)
}

/// Width-10 rows for ranks 8, 9, 10, ascending in `2^n`.
#[pyfunction]
fn fit_k10_high_ranks(py: Python<'_>) -> PyResult<Bound<'_, PyDict>> {
    let fit = fitting::fit_k10_high_ranks().map_err(to_py)?;
    let d = PyDict::new(py);
    for (slot, row) in fit.rows.iter().enumerate() {
        d.set_item(8 + slot, coeffs(row))?;
    }
    d.set_item("equations", fit.equations)?;
    d.set_item("unknowns", fit.unknowns)?;
    d.set_item("consistent", fit.consistent)?;
    Ok(d)
}

/// Which printed variants of the two disputed constants are consistent.
#[pyfunction]
#[pyo3(signature = (y2_literals=vec![670888385, 67088385], rank7_y5_literals=vec![5117310, 51117310]))]
fn adjudicate_transcriptions(
    py: Python<'_>,
    y2_literals: Vec<i64>,
    rank7_y5_literals: Vec<i64>,
) -> PyResult<Bound<'_, PyDict>> {
    let rep =
        identities::adjudicate_transcriptions(&y2_literals, &rank7_y5_literals).map_err(to_py)?;
    let verdicts = |cs: &[identities::TranscriptionCandidate]| -> Vec<(i64, bool)> {
        cs.iter().map(|c| (c.literal, c.consistent)).collect()
    };
    let d = PyDict::new(py);
    d.set_item("targets", rep.targets.clone())?;
    d.set_item("y2", verdicts(&rep.y2_candidates))?;
    d.set_item("rank7_y5", verdicts(&rep.rank7_y5_candidates))?;
    d.set_item("recomputed_y2", rat_string(&rep.recomputed_y2))?;
    d.set_item("recomputed_rank7_y5", rat_string(&rep.recomputed_rank7_y5))?;
    d.set_item("resolved", rep.resolved())?;
    Ok(d)
}

#[pymodule]
#[pyo3(name = "persym")]
fn persym_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add("InconsistentError", m.py().get_type::<InconsistentError>())?;
    m.add_class::<PyRankDistribution>()?;
    m.add_class::<PyCoeffTuple>()?;
    m.add_function(wrap_pyfunction!(census, m)?)?;
    m.add_function(wrap_pyfunction!(census_naive, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_general, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_k10, m)?)?;
    m.add_function(wrap_pyfunction!(closedform_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(r_qnk, m)?)?;
    m.add_function(wrap_pyfunction!(count_solutions_bruteforce, m)?)?;
    m.add_function(wrap_pyfunction!(count_solutions_marginalized, m)?)?;
    m.add_function(wrap_pyfunction!(verify_moments, m)?)?;
    m.add_function(wrap_pyfunction!(fit_gamma7, m)?)?;
    m.add_function(wrap_pyfunction!(fit_k10_high_ranks, m)?)?;
    m.add_function(wrap_pyfunction!(adjudicate_transcriptions, m)?)?;
    Ok(())
}
