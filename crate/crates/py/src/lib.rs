//! Python bindings for the bondlab toolkit.
//!
//! Exposes the [`Graph`](PyGraph) class (construction, sampling, domination
//! counts, bondage bounds, and damage queries) plus the closed-form helpers
//! as module-level functions. Results that are structured on the Rust side
//! come back as plain dicts; exact rationals come back as `(numerator,
//! denominator)` tuples so callers can lift them into `fractions.Fraction`.
//!
//! Errors map onto Python exceptions by kind: domain and format errors raise
//! `ValueError`, capacity overruns raise `RuntimeError`, and file-system
//! failures raise `OSError`.

use bondlab::bondage::{
    bondage_bounds, bondage_exact, certified_lower_bound, damage_directed, fink_bauer_bound,
    hartnell_rall_bound, Bound as CoreBound, BondageMode, BondageResult, Damage, MinDomCount,
};
use bondlab::domination::{
    count_dominating_sets, enumerate_min_sets, gamma_exact, has_dominating_set_within,
    intersection_profile, z_per_vertex,
};
use bondlab::formula::{
    chernoff_lower_tail, chernoff_phi, chernoff_upper_tail, compute_r, expected_damage,
    hat_probability, log_f, r_closed_form, FormulaContext,
};
use bondlab::graph::{
    from_json_str, process_stream, sample_gnm, sample_gnp, to_edge_list_string, to_json_string,
    Graph, RandomSource,
};
use pyo3::exceptions::{PyIOError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;
use pyo3::IntoPyObjectExt;

fn to_py_err(e: bondlab::Error) -> PyErr {
    match e {
        bondlab::Error::Domain(_) | bondlab::Error::Format(_) => {
            PyValueError::new_err(e.to_string())
        }
        bondlab::Error::Capacity(_) => PyRuntimeError::new_err(e.to_string()),
        bondlab::Error::Io { .. } => PyIOError::new_err(e.to_string()),
    }
}

/// Finite bounds become ints, infinite ones `float('inf')`.
fn bound_to_py(py: Python<'_>, b: CoreBound) -> PyResult<Py<PyAny>> {
    match b {
        CoreBound::Finite(x) => x.into_py_any(py),
        CoreBound::Infinite => f64::INFINITY.into_py_any(py),
    }
}

fn ratio_pair(z: &Damage) -> (i128, i128) {
    (*z.numer(), *z.denom())
}

fn bondage_dict<'py>(py: Python<'py>, result: &BondageResult) -> PyResult<Bound<'py, PyDict>> {
    let dict = PyDict::new(py);
    let mode = match result.mode {
        BondageMode::Exact => "exact",
        BondageMode::Bounds => "bounds",
        BondageMode::Certify => "certify",
    };
    dict.set_item("mode", mode)?;
    dict.set_item("gamma", result.gamma)?;
    match result.b {
        Some(b) => dict.set_item("b", bound_to_py(py, b)?)?,
        None => dict.set_item("b", py.None())?,
    }
    dict.set_item("b_gt", result.b_gt)?;
    dict.set_item("fink_bauer", bound_to_py(py, result.fink_bauer)?)?;
    dict.set_item("hartnell_rall", bound_to_py(py, result.hartnell_rall)?)?;
    let mdc = match result.min_dom_count {
        MinDomCount::Bound(x) => x.into_py_any(py)?,
        MinDomCount::Infinite => f64::INFINITY.into_py_any(py)?,
        MinDomCount::Inapplicable => py.None(),
    };
    dict.set_item("min_dom_count", mdc)?;
    if let Some(cert) = &result.certificate {
        let inner = PyDict::new(py);
        inner.set_item("x_gamma", cert.x_gamma)?;
        inner.set_item("certified", cert.certified)?;
        inner.set_item("top_damages", cert.top_damages.clone())?;
        dict.set_item("certificate", inner)?;
    }
    Ok(dict)
}

/// Undirected graph on vertices `0..n`.
#[pyclass(name = "Graph", module = "bondlab_py", skip_from_py_object)]
#[derive(Clone, Debug)]
pub struct PyGraph {
    inner: Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Graph::from_edges(n, edges)
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    /// Parse the JSON graph format (`{"n": ..., "edges": [[u, v], ...]}`).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        from_json_str(text).map(|inner| Self { inner }).map_err(to_py_err)
    }

    /// Sample `G(n, p)`; `stream` selects an independent substream of the
    /// seed, so `(seed, stream)` pairs never share randomness.
    #[staticmethod]
    #[pyo3(signature = (n, p, seed, stream = 0))]
    fn gnp(n: usize, p: f64, seed: u64, stream: u64) -> PyResult<Self> {
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(PyValueError::new_err(format!(
                "p must lie in [0, 1], got {p}"
            )));
        }
        Ok(Self {
            inner: sample_gnp(n, p, RandomSource::with_stream(seed, stream)),
        })
    }

    /// Sample `G(n, m)`: a uniform graph with exactly `m` edges.
    #[staticmethod]
    #[pyo3(signature = (n, m, seed, stream = 0))]
    fn gnm(n: usize, m: u64, seed: u64, stream: u64) -> PyResult<Self> {
        sample_gnm(n, m, RandomSource::with_stream(seed, stream))
            .map(|inner| Self { inner })
            .map_err(to_py_err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn m(&self) -> usize {
        self.inner.edge_count()
    }

    #[getter]
    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    #[getter]
    fn min_degree(&self) -> usize {
        self.inner.min_degree()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.degree(v))
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {v} out of range")));
        }
        Ok(self.inner.neighbors(v).collect())
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn to_json(&self) -> String {
        to_json_string(&self.inner)
    }

    fn to_edge_list(&self) -> String {
        to_edge_list_string(&self.inner)
    }

    /// Domination number γ.
    fn gamma(&self) -> usize {
        gamma_exact(&self.inner)
    }

    /// `X_k`: the number of dominating sets of size exactly `k`.
    fn count_dominating_sets(&self, k: usize) -> u64 {
        count_dominating_sets(&self.inner, k)
    }

    /// `Z_v` for every vertex: how many dominating `r`-sets contain `v`.
    fn z_per_vertex(&self, r: usize) -> Vec<u64> {
        z_per_vertex(&self.inner, r)
    }

    /// `W_0..W_r`: pairs of dominating `r`-sets by intersection size.
    #[pyo3(signature = (r, cap = 10_000_000))]
    fn intersection_profile(&self, r: usize, cap: u64) -> PyResult<Vec<u64>> {
        intersection_profile(&self.inner, r, cap)
            .map(|profile| profile.counts)
            .map_err(to_py_err)
    }

    /// A dominating set of size at most `budget`, or `None`.
    fn dominating_set_within(&self, budget: usize) -> Option<Vec<usize>> {
        has_dominating_set_within(&self.inner, budget).map(|s| s.members())
    }

    /// All minimum dominating sets (up to `cap` of them) as vertex lists.
    #[pyo3(signature = (cap = 1_000_000))]
    fn minimum_dominating_sets(&self, cap: u64) -> (usize, Vec<Vec<usize>>, bool) {
        let found = enumerate_min_sets(&self.inner, cap);
        let sets = found.sets.iter().map(|s| s.members()).collect();
        (found.gamma, sets, found.truncated)
    }

    /// Exact bondage computation; see the CLI's `bondage` subcommand.
    #[pyo3(signature = (limit = None, prune = true))]
    fn bondage<'py>(
        &self,
        py: Python<'py>,
        limit: Option<u64>,
        prune: bool,
    ) -> PyResult<Bound<'py, PyDict>> {
        bondage_dict(py, &bondage_exact(&self.inner, limit, prune))
    }

    /// Classical bondage bounds only (no enumeration).
    fn bondage_bounds<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        bondage_dict(py, &bondage_bounds(&self.inner))
    }

    /// Certified strict lower bound `b > certified` from per-edge damages.
    #[pyo3(signature = (cap = 1_000_000))]
    fn certified_lower_bound<'py>(
        &self,
        py: Python<'py>,
        cap: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let result = certified_lower_bound(&self.inner, cap).map_err(to_py_err)?;
        bondage_dict(py, &result)
    }

    /// Directed damage of the non-edge (or edge) `u → v` at set size `r`:
    /// the overlap counts and the damage `Z` as an exact rational.
    fn damage<'py>(
        &self,
        py: Python<'py>,
        u: usize,
        v: usize,
        r: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let d = damage_directed(&self.inner, u, v, r).map_err(to_py_err)?;
        let dict = PyDict::new(py);
        dict.set_item("u", d.u)?;
        dict.set_item("v", d.v)?;
        dict.set_item("r", d.r)?;
        dict.set_item("counts", d.counts.clone())?;
        dict.set_item("z", ratio_pair(&d.z))?;
        Ok(dict)
    }

    /// Fink–Bauer upper bound `min over edges of deg u + deg v − 1`.
    fn fink_bauer<'py>(&self, py: Python<'py>) -> PyResult<Py<PyAny>> {
        bound_to_py(py, fink_bauer_bound(&self.inner))
    }

    /// Hartnell–Rall upper bound over edges.
    fn hartnell_rall<'py>(&self, py: Python<'py>) -> PyResult<Py<PyAny>> {
        bound_to_py(py, hartnell_rall_bound(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={})", self.inner.n(), self.inner.edge_count())
    }
}

/// Smallest `k` with `C(n, k) (1 − (1−p)^k)^{n−k} > 1/(pn)`.
#[pyfunction]
#[pyo3(name = "compute_r")]
fn py_compute_r(n: u64, p: f64) -> PyResult<u64> {
    compute_r(n, p).map_err(to_py_err)
}

/// Closed-form approximation of `r`; requires `pn > e`.
#[pyfunction]
#[pyo3(name = "r_closed_form")]
fn py_r_closed_form(n: u64, p: f64) -> PyResult<u64> {
    r_closed_form(n, p).map_err(to_py_err)
}

/// `ln f(n, k, p)` where `f` is the expected number of dominating `k`-sets.
#[pyfunction]
#[pyo3(name = "log_f")]
fn py_log_f(n: u64, k: u64, p: f64) -> PyResult<f64> {
    log_f(n, k, p).map(|v| v.ln()).map_err(to_py_err)
}

/// `p̂ = ln(1 / (1 − p))`.
#[pyfunction]
#[pyo3(name = "hat_probability")]
fn py_hat_probability(p: f64) -> f64 {
    hat_probability(p)
}

/// `φ(x) = (1 + x) ln(1 + x) − x`, the Chernoff rate function.
#[pyfunction]
#[pyo3(name = "chernoff_phi")]
fn py_chernoff_phi(x: f64) -> f64 {
    chernoff_phi(x)
}

/// `Pr(Bin ≤ (1 − δ) μ) ≤ exp(−μ φ(−δ))` — the bound's right-hand side.
#[pyfunction]
#[pyo3(name = "chernoff_lower_tail")]
fn py_chernoff_lower_tail(mu: f64, delta: f64) -> PyResult<f64> {
    chernoff_lower_tail(mu, delta).map_err(to_py_err)
}

/// `Pr(Bin ≥ (1 + δ) μ) ≤ exp(−μ φ(δ))` — the bound's right-hand side.
#[pyfunction]
#[pyo3(name = "chernoff_upper_tail")]
fn py_chernoff_upper_tail(mu: f64, delta: f64) -> PyResult<f64> {
    chernoff_upper_tail(mu, delta).map_err(to_py_err)
}

/// Expected directed damage `E Z_{→uv}` for `G(n, p)` at the canonical `r`.
#[pyfunction]
#[pyo3(name = "expected_damage", signature = (n, p, epsilon = 0.1))]
fn py_expected_damage(n: u64, p: f64, epsilon: f64) -> PyResult<f64> {
    let ctx = FormulaContext::new(n, p, epsilon).map_err(to_py_err)?;
    Ok(expected_damage(&ctx).value())
}

/// All derived formula quantities for `(n, p, epsilon)` in one dict.
#[pyfunction]
#[pyo3(signature = (n, p, epsilon = 0.1))]
fn formula_context<'py>(
    py: Python<'py>,
    n: u64,
    p: f64,
    epsilon: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let ctx = FormulaContext::new(n, p, epsilon).map_err(to_py_err)?;
    let dict = PyDict::new(py);
    dict.set_item("n", ctx.n)?;
    dict.set_item("p", ctx.p)?;
    dict.set_item("epsilon", ctx.epsilon)?;
    dict.set_item("p_hat", ctx.p_hat)?;
    dict.set_item("r", ctx.r)?;
    dict.set_item("rho", ctx.rho)?;
    dict.set_item("heavy_threshold", ctx.heavy_threshold)?;
    Ok(dict)
}

/// The shuffled vertex-pair order of the growing edge process.
#[pyfunction]
#[pyo3(signature = (n, seed, stream = 0))]
fn process_order(n: usize, seed: u64, stream: u64) -> Vec<(usize, usize)> {
    process_stream(n, RandomSource::with_stream(seed, stream))
}

#[pymodule]
fn bondlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_function(wrap_pyfunction!(py_compute_r, m)?)?;
    m.add_function(wrap_pyfunction!(py_r_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(py_log_f, m)?)?;
    m.add_function(wrap_pyfunction!(py_hat_probability, m)?)?;
    m.add_function(wrap_pyfunction!(py_chernoff_phi, m)?)?;
    m.add_function(wrap_pyfunction!(py_chernoff_lower_tail, m)?)?;
    m.add_function(wrap_pyfunction!(py_chernoff_upper_tail, m)?)?;
    m.add_function(wrap_pyfunction!(py_expected_damage, m)?)?;
    m.add_function(wrap_pyfunction!(formula_context, m)?)?;
    m.add_function(wrap_pyfunction!(process_order, m)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_python<F: FnOnce(Python<'_>) + Send>(f: F) {
        Python::initialize();
        Python::attach(f);
    }

    #[test]
    fn graph_methods_round_trip() {
        let c6 = PyGraph::new(6, (0..6).map(|i| (i, (i + 1) % 6)).collect()).unwrap();
        assert_eq!(c6.gamma(), 2);
        assert_eq!(c6.count_dominating_sets(2), 3);
        assert_eq!(c6.count_dominating_sets(3), 14);
        assert_eq!(c6.edges().len(), 6);
        let parsed = PyGraph::from_json(&c6.to_json()).unwrap();
        assert_eq!(parsed.edges(), c6.edges());
    }

    #[test]
    fn dict_results_match_the_library() {
        with_python(|py| {
            let c4 = PyGraph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
            let result = c4.bondage(py, None, true).unwrap();
            let b: u64 = result.get_item("b").unwrap().unwrap().extract().unwrap();
            assert_eq!(b, 3);

            let empty = PyGraph::new(3, vec![]).unwrap();
            let result = empty.bondage(py, None, true).unwrap();
            let b: f64 = result.get_item("b").unwrap().unwrap().extract().unwrap();
            assert!(b.is_infinite());

            let damage = c4.damage(py, 0, 2, 2).unwrap();
            let (num, den): (i128, i128) =
                damage.get_item("z").unwrap().unwrap().extract().unwrap();
            assert!(den > 0 && num >= 0);
        });
    }

    #[test]
    fn errors_translate_to_python_exceptions() {
        with_python(|py| {
            let err = PyGraph::gnp(5, 1.5, 0, 0).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
            let err = py_compute_r(10, 0.05).unwrap_err();
            assert!(err.is_instance_of::<PyValueError>(py));
            let big = PyGraph::gnp(24, 0.5, 7, 0).unwrap();
            let err = big.intersection_profile(big.gamma() + 2, 10).unwrap_err();
            assert!(err.is_instance_of::<PyRuntimeError>(py));
        });
    }
}
