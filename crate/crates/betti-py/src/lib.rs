//! Python bindings for the exact Betti-table engine.
//!
//! The module exposes the core type (`BettiTable`) plus the main operations:
//! solving the generating functions for the two moduli families, the
//! reference families (Hilbert schemes, GIT quotients, flag varieties),
//! distribution statistics (exact moments, Kolmogorov distance, the
//! middle-coefficient Gaussian estimate), exact ultra-log-concavity checks,
//! the symbolic asymptotic constants, the self-verification suite, and the
//! quotient-data ingest/prediction pipeline.
//!
//! Exact rationals cross the boundary as `fractions.Fraction`, big integers
//! as Python ints; floats appear only where the library itself is numeric.

use num::BigInt;
use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

use betti_core::asymptotics::{
    b_moments_derived, mean_formula as core_mean_formula, qp_moments, rho_derivs_at_1,
    table_variance_formula, variance_offset, variance_slope, Family,
};
use betti_core::gallery::{flag_betti, git_betti, hilb_series, SurfaceBetti};
use betti_core::logconcavity::{central_window_ulc, is_log_concave, max_ulc_r};
use betti_core::moduli::{betti_fm, betti_m0n, solve_phi, solve_psi};
use betti_core::quotient::{self, QuotientDataset};
use betti_core::statistics::{ks_distance, middle_betti_rel_error, moments, BettiDistribution};
use betti_core::verify::run_identity_suite;
use betti_core::{BettiTable, Rat, Space};

fn err(e: betti_core::Error) -> PyErr {
    match e {
        betti_core::Error::Io(io) => PyIOError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn parse_family(name: &str) -> PyResult<Family> {
    match Space::parse(name).map_err(err)? {
        Space::M0n => Ok(Family::M0n),
        Space::Fm => Ok(Family::Fm),
        other => Err(PyValueError::new_err(format!(
            "closed-form moments exist for M0n and FM only, got {other}"
        ))),
    }
}

/// Exact rational -> `fractions.Fraction`.
fn fraction<'py>(py: Python<'py>, r: &Rat) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?
        .getattr("Fraction")?
        .call1((r.numer().clone(), r.denom().clone()))
}

/// A Betti table: the coefficient list (b_0, ..., b_d) of one space's
/// Poincare polynomial, with b_k = dim H^(2k).
#[pyclass(name = "BettiTable", frozen, from_py_object)]
#[derive(Clone)]
struct PyBettiTable {
    inner: BettiTable,
}

impl From<BettiTable> for PyBettiTable {
    fn from(inner: BettiTable) -> Self {
        PyBettiTable { inner }
    }
}

#[pymethods]
impl PyBettiTable {
    /// Build and validate a table. `space` is one of M0n, FM, Hilb, GIT,
    /// Flag, M0nQuot, M0n1Quot, FMQuot; validation (positivity, palindromy
    /// for the smooth proper families, length) matches the space.
    #[new]
    fn new(space: &str, n: u32, betti: Vec<BigInt>) -> PyResult<Self> {
        let sp = Space::parse(space).map_err(err)?;
        Ok(BettiTable::new(sp, n, betti).map_err(err)?.into())
    }

    /// Parse the JSON document produced by `to_json` (also the CLI cache
    /// format), re-running validation.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let table: BettiTable =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(table.into())
    }

    #[getter]
    fn space(&self) -> String {
        self.inner.space().to_string()
    }

    #[getter]
    fn n(&self) -> u32 {
        self.inner.n()
    }

    #[getter]
    fn betti(&self) -> Vec<BigInt> {
        self.inner.betti().to_vec()
    }

    #[getter]
    fn top_degree(&self) -> usize {
        self.inner.top_degree()
    }

    fn euler_char(&self) -> BigInt {
        self.inner.euler_char()
    }

    /// Exact mean of the normalized distribution, as a Fraction.
    fn mean<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &moments(&self.inner).0)
    }

    /// Exact variance of the normalized distribution, as a Fraction.
    fn variance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &moments(&self.inner).1)
    }

    /// The table normalized by its Euler characteristic: a list of exact
    /// Fractions summing to 1.
    fn probs<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        BettiDistribution::new(self.inner.clone())
            .probs()
            .iter()
            .map(|p| fraction(py, p))
            .collect()
    }

    /// Kolmogorov distance between the normalized table and the Gaussian
    /// with the table's own mean and standard deviation.
    fn ks_distance(&self) -> PyResult<f64> {
        ks_distance(&BettiDistribution::new(self.inner.clone())).map_err(err)
    }

    /// Relative error of the Gaussian density estimate of the middle
    /// coefficient (M0n tables only).
    fn middle_betti_rel_error(&self) -> PyResult<f64> {
        middle_betti_rel_error(&self.inner).map_err(err)
    }

    /// (holds, first_violation) of plain log-concavity.
    fn is_log_concave(&self) -> (bool, Option<usize>) {
        let v = is_log_concave(self.inner.betti());
        (v.holds, v.first_violation)
    }

    /// Exact r-fold ultra-log-concavity over the central window
    /// |k - d/2| <= c*sqrt(n); returns a dict with holds, first_violation,
    /// window, ambient_n.
    #[pyo3(signature = (r=3, c=1.0))]
    fn central_window_ulc<'py>(
        &self,
        py: Python<'py>,
        r: u32,
        c: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let v = central_window_ulc(&self.inner, r, c);
        let d = PyDict::new(py);
        d.set_item("r", v.r)?;
        d.set_item("c", v.c)?;
        d.set_item("ambient_n", v.ambient_n)?;
        d.set_item("window", v.window)?;
        d.set_item("holds", v.holds)?;
        d.set_item("first_violation", v.first_violation)?;
        Ok(d)
    }

    /// Largest r <= cap for which r-ULC holds at interior index k, or None.
    #[pyo3(signature = (k, cap=16))]
    fn max_ulc_r(&self, k: usize, cap: u32) -> PyResult<Option<u32>> {
        max_ulc_r(&self.inner, k, cap).map_err(err)
    }

    /// Canonical JSON rendering (the CLI cache format).
    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __len__(&self) -> usize {
        self.inner.betti().len()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        let b: Vec<String> = self.inner.betti().iter().map(|x| x.to_string()).collect();
        format!(
            "BettiTable({}, n={}, [{}])",
            self.inner.space(),
            self.inner.n(),
            b.join(", ")
        )
    }
}

/// Tables of M-bar_{0,n} for n = 3..=max_n, from one solve of the
/// functional equation.
#[pyfunction]
fn m0n_tables(max_n: u32) -> PyResult<Vec<PyBettiTable>> {
    if max_n < 3 {
        return Err(PyValueError::new_err("M0n needs n >= 3"));
    }
    let phi = solve_phi(max_n as usize - 1).map_err(err)?;
    (3..=max_n)
        .map(|n| Ok(betti_m0n(n, &phi).map_err(err)?.into()))
        .collect()
}

/// Tables of P^1[n] for n = 0..=max_n.
#[pyfunction]
fn fm_tables(max_n: u32) -> PyResult<Vec<PyBettiTable>> {
    let phi = solve_phi((max_n as usize).max(1)).map_err(err)?;
    let psi = solve_psi(max_n as usize, &phi).map_err(err)?;
    (0..=max_n)
        .map(|n| Ok(betti_fm(n, &psi).map_err(err)?.into()))
        .collect()
}

/// Tables of Hilb^k(S) for k = 0..=max_n over a preset surface
/// ("P2", "P1xP1", "A2") or "b0,b1,b2" Betti numbers.
#[pyfunction]
fn hilb_tables(surface: &str, max_n: u32) -> PyResult<Vec<PyBettiTable>> {
    let s = SurfaceBetti::parse(surface).map_err(err)?;
    Ok(hilb_series(s, max_n)
        .map_err(err)?
        .into_iter()
        .map(Into::into)
        .collect())
}

/// Table of (P^1)^n // SL_2 (odd n only).
#[pyfunction]
fn git_table(n: u32) -> PyResult<PyBettiTable> {
    Ok(git_betti(n).map_err(err)?.into())
}

/// Table of the full flag variety of C^n (Mahonian distribution).
#[pyfunction]
fn flag_table(n: u32) -> PyResult<PyBettiTable> {
    Ok(flag_betti(n).map_err(err)?.into())
}

/// Closed-form exact mean for a family at table label n:
/// (n-3)/2 for M0n, n/2 for FM.
#[pyfunction]
fn mean_formula<'py>(py: Python<'py>, n: u32, family: &str) -> PyResult<Bound<'py, PyAny>> {
    fraction(py, &core_mean_formula(n, parse_family(family)?))
}

/// Closed-form asymptotic variance (slope * series order + offset) for a
/// family at table label n.
#[pyfunction]
fn variance_formula(n: u32, family: &str) -> PyResult<f64> {
    Ok(table_variance_formula(n, parse_family(family)?))
}

/// Gaussian parameters (mean, variance, sd) the quasi-powers limit assigns
/// to a family at label n.
#[pyfunction]
fn gaussian_parameters<'py>(
    py: Python<'py>,
    n: f64,
    family: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let m = qp_moments(n, parse_family(family)?);
    let d = PyDict::new(py);
    d.set_item("mean", m.mean)?;
    d.set_item("variance", m.variance)?;
    d.set_item("sd", m.variance.sqrt())?;
    Ok(d)
}

/// The symbolic singularity constants, each as {"exact": str, "value": float}:
/// rho and its first two derivatives at u=1, the per-step drift mean and
/// variance, the variance slope, and the per-family variance offsets.
#[pyfunction]
fn asymptotic_constants<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
    let pair = |e: &betti_core::symbolic::EExpr| -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        d.set_item("exact", e.to_string())?;
        d.set_item("value", e.eval_f64())?;
        Ok(d)
    };
    let [r0, r1, r2] = rho_derivs_at_1();
    let (mb, vb) = b_moments_derived();
    let d = PyDict::new(py);
    d.set_item("rho_at_1", pair(&r0)?)?;
    d.set_item("rho_prime_at_1", pair(&r1)?)?;
    d.set_item("rho_second_at_1", pair(&r2)?)?;
    d.set_item("per_step_mean", pair(&mb)?)?;
    d.set_item("per_step_variance", pair(&vb)?)?;
    d.set_item("variance_slope", pair(&variance_slope())?)?;
    d.set_item("variance_offset_m0n", pair(&variance_offset(Family::M0n))?)?;
    d.set_item("variance_offset_fm", pair(&variance_offset(Family::Fm))?)?;
    Ok(d)
}

/// Scan |rho(u)| over the unit circle; with a positive exclusion radius the
/// scan also reports the growth-rate ratio K outside the excluded arc.
#[pyfunction]
#[pyo3(signature = (grid_points=4096, exclusion_radius=0.1))]
fn rho_modulus_scan<'py>(
    py: Python<'py>,
    grid_points: usize,
    exclusion_radius: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let s = betti_core::asymptotics::rho_modulus_scan(grid_points, exclusion_radius).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("grid_points", s.grid_points)?;
    d.set_item("exclusion_radius", s.exclusion_radius)?;
    d.set_item("min_modulus", s.min_modulus)?;
    d.set_item("min_theta", s.min_theta)?;
    d.set_item("outside_min_modulus", s.outside_min_modulus)?;
    d.set_item("outside_min_theta", s.outside_min_theta)?;
    d.set_item("growth_ratio", s.growth_ratio)?;
    Ok(d)
}

/// Run the self-verification identity suite; returns
/// {"all_passed": bool, "checks": [{"name", "passed", "detail"}, ...]}.
#[pyfunction]
#[pyo3(signature = (max_n=30, oracle_depth=10))]
fn identity_suite<'py>(
    py: Python<'py>,
    max_n: usize,
    oracle_depth: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let report = run_identity_suite(max_n, oracle_depth);
    let checks = PyList::empty(py);
    for c in &report.checks {
        let d = PyDict::new(py);
        d.set_item("name", &c.name)?;
        d.set_item("passed", c.passed)?;
        d.set_item("detail", &c.detail)?;
        checks.append(d)?;
    }
    let d = PyDict::new(py);
    d.set_item("all_passed", report.all_passed())?;
    d.set_item("checks", checks)?;
    Ok(d)
}

/// Ingest externally computed quotient tables from JSON; returns
/// {"tables": {family: [BettiTable, ...]}, "warnings": [...]}.
#[pyfunction]
#[pyo3(signature = (text, provenance="python ingest"))]
fn ingest_quotient<'py>(
    py: Python<'py>,
    text: &str,
    provenance: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let report = quotient::ingest_json(text, provenance).map_err(err)?;
    let families = PyDict::new(py);
    for ds in &report.datasets {
        let tables: Vec<PyBettiTable> =
            ds.tables.values().cloned().map(Into::into).collect();
        families.set_item(ds.family.to_string(), tables)?;
    }
    let d = PyDict::new(py);
    d.set_item("tables", families)?;
    d.set_item("warnings", report.warnings.clone())?;
    Ok(d)
}

/// Predict the P^1[n]/S_n table from ingested M-bar_{0,n+1}/S_n tables
/// (needs labels n and n-1), checking the two computation paths against
/// each other exactly.
#[pyfunction]
fn predict_fm_quotient(tables: Vec<PyBettiTable>, n: u32) -> PyResult<PyBettiTable> {
    let mut dataset = QuotientDataset {
        family: Space::M0n1Quot,
        tables: Default::default(),
        provenance: "python input".into(),
    };
    for t in tables {
        if t.inner.space() != Space::M0n1Quot {
            return Err(PyValueError::new_err(format!(
                "prediction consumes M0n1Quot tables, got {}",
                t.inner.space()
            )));
        }
        dataset.tables.insert(t.inner.n(), t.inner);
    }
    Ok(quotient::predict_fm_quotient(&dataset, n).map_err(err)?.into())
}

/// Normalized variances sigma^2/n of the ingested quotient families, one
/// row per n, each cell a 10-decimal string computed from the exact
/// rationals; missing entries are None.
#[pyfunction]
#[pyo3(signature = (text, rows=None))]
fn table1<'py>(
    py: Python<'py>,
    text: &str,
    rows: Option<Vec<u32>>,
) -> PyResult<Bound<'py, PyList>> {
    let report = quotient::ingest_json(text, "python ingest").map_err(err)?;
    let out = PyList::empty(py);
    for row in quotient::table1_report(&report, rows.as_deref()) {
        let d = PyDict::new(py);
        d.set_item("n", row.n)?;
        d.set_item("m0n_quot", row.m0n_quot)?;
        d.set_item("m0n1_quot", row.m0n1_quot)?;
        d.set_item("fm_quot", row.fm_quot)?;
        out.append(d)?;
    }
    Ok(out)
}

#[pymodule]
fn betti_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBettiTable>()?;
    m.add_function(wrap_pyfunction!(m0n_tables, m)?)?;
    m.add_function(wrap_pyfunction!(fm_tables, m)?)?;
    m.add_function(wrap_pyfunction!(hilb_tables, m)?)?;
    m.add_function(wrap_pyfunction!(git_table, m)?)?;
    m.add_function(wrap_pyfunction!(flag_table, m)?)?;
    m.add_function(wrap_pyfunction!(mean_formula, m)?)?;
    m.add_function(wrap_pyfunction!(variance_formula, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_parameters, m)?)?;
    m.add_function(wrap_pyfunction!(asymptotic_constants, m)?)?;
    m.add_function(wrap_pyfunction!(rho_modulus_scan, m)?)?;
    m.add_function(wrap_pyfunction!(identity_suite, m)?)?;
    m.add_function(wrap_pyfunction!(ingest_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(predict_fm_quotient, m)?)?;
    m.add_function(wrap_pyfunction!(table1, m)?)?;
    Ok(())
}
