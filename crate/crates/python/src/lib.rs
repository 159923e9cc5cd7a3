//! Python bindings. Missing values are `None` (or NaN); errors raise `ValueError`.

use kendall_core::analysis::{self, Decision, Method};
use kendall_core::{KendallError, KendallSequence, OrdinalVector, PairVote, PairVotes, Symbol};
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn value_error(e: KendallError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn ordinal(name: &str, values: Vec<Option<f64>>) -> OrdinalVector {
    // NaN counts as missing, as in the core constructor
    OrdinalVector::new(name, values.into_iter().map(|v| v.unwrap_or(f64::NAN)))
}

/// Pair-relation sequence of length `n(n-1)`; symbols are "A", "D", "T", "NA".
#[pyclass(name = "KendallSequence", module = "kendall", frozen, eq, skip_from_py_object)]
#[derive(Clone, PartialEq)]
struct PySequence {
    inner: KendallSequence,
}

#[pymethods]
impl PySequence {
    /// Builds a sequence over `n` objects from symbol strings in pair order.
    #[new]
    fn new(n: usize, symbols: Vec<String>) -> PyResult<Self> {
        let parsed = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Symbol::parse(s).ok_or_else(|| PyValueError::new_err(format!("pair {i}: malformed symbol '{s}'")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        let inner = KendallSequence::from_symbols(n, &parsed).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __getitem__(&self, index: usize) -> PyResult<&'static str> {
        if index >= self.inner.len() {
            return Err(PyIndexError::new_err(format!("pair index {index} out of range")));
        }
        Ok(self.inner.get(index).as_str())
    }

    fn symbols(&self) -> Vec<&'static str> {
        self.inner.iter().map(Symbol::as_str).collect()
    }

    /// Relation of object `a` to object `b`.
    fn relation(&self, a: usize, b: usize) -> PyResult<&'static str> {
        self.inner.relation(a, b).map(Symbol::as_str).map_err(value_error)
    }

    /// Counts of (A, D, T, NA).
    fn counts(&self) -> (usize, usize, usize, usize) {
        let [a, d, t, m] = self.inner.symbol_counts();
        (a, d, t, m)
    }

    fn __repr__(&self) -> String {
        let [a, d, t, m] = self.inner.symbol_counts();
        format!("KendallSequence(n={}, A={a}, D={d}, T={t}, NA={m})", self.inner.n())
    }
}

fn seqs<'a>(xs: &'a [PyRef<'a, PySequence>]) -> Vec<KendallSequence> {
    xs.iter().map(|s| s.inner.clone()).collect()
}

#[pyfunction]
#[pyo3(signature = (values, tie_tolerance=None))]
fn kendall_transform(values: Vec<Option<f64>>, tie_tolerance: Option<f64>) -> PyResult<PySequence> {
    let opts = kendall_core::transform::TransformOptions { tie_tolerance };
    let inner = kendall_core::transform::kendall_transform_with(&ordinal("x", values), opts).map_err(value_error)?;
    Ok(PySequence { inner })
}

#[pyfunction]
fn pair_at(index: usize, n: usize) -> PyResult<(usize, usize)> {
    kendall_core::pair_at(index, n).map_err(value_error)
}

#[pyfunction]
fn pair_index(a: usize, b: usize, n: usize) -> PyResult<usize> {
    kendall_core::pair_index(a, b, n).map_err(value_error)
}

/// Plug-in entropy in nats.
#[pyfunction]
fn entropy(x: PyRef<'_, PySequence>) -> PyResult<f64> {
    kendall_core::entropy(&x.inner).map_err(value_error)
}

#[pyfunction]
fn mutual_information(x: PyRef<'_, PySequence>, y: PyRef<'_, PySequence>) -> PyResult<f64> {
    kendall_core::mutual_information(&x.inner, &y.inner).map_err(value_error)
}

/// `I(X;Y|Z)` in nats.
#[pyfunction]
fn conditional_mi(x: PyRef<'_, PySequence>, y: PyRef<'_, PySequence>, z: PyRef<'_, PySequence>) -> PyResult<f64> {
    kendall_core::conditional_mi(&x.inner, &y.inner, &z.inner).map_err(value_error)
}

/// `I(X;Y;Z)` in nats; negative values mean synergy.
#[pyfunction]
fn interaction_information(
    x: PyRef<'_, PySequence>,
    y: PyRef<'_, PySequence>,
    z: PyRef<'_, PySequence>,
) -> PyResult<f64> {
    kendall_core::interaction_information(&x.inner, &y.inner, &z.inner).map_err(value_error)
}

#[pyfunction]
fn mi_from_tau(tau: f64) -> PyResult<f64> {
    kendall_core::mi_from_tau(tau).map_err(value_error)
}

#[pyfunction]
fn mi_from_rho(rho: f64) -> PyResult<f64> {
    kendall_core::mi_from_rho(rho).map_err(value_error)
}

#[pyfunction]
fn mi_from_auroc(auc: f64, a: u64, b: u64) -> PyResult<f64> {
    kendall_core::mi_from_auroc(auc, a, b).map_err(value_error)
}

/// Returns `(tau, concordant, discordant)` over ordered pairs.
#[pyfunction]
fn kendall_tau(x: Vec<Option<f64>>, y: Vec<Option<f64>>) -> PyResult<(f64, u64, u64)> {
    let t = kendall_core::kendall_tau(&ordinal("x", x), &ordinal("y", y)).map_err(value_error)?;
    Ok((t.tau, t.concordant, t.discordant))
}

/// Returns `(auc, U)`; `labels` marks the positive class.
#[pyfunction]
fn auroc(x: Vec<Option<f64>>, labels: Vec<bool>) -> PyResult<(f64, f64)> {
    let r = kendall_core::auroc(&ordinal("x", x), &labels).map_err(value_error)?;
    Ok((r.auc, r.u))
}

/// Per-object fractional ranks; rank 1 is the smallest value.
#[pyfunction]
fn copeland_inverse(x: PyRef<'_, PySequence>) -> Vec<f64> {
    kendall_core::copeland_inverse(&x.inner).ranks
}

/// `votes` holds one `(asc, desc, tie)` weight triple per ordered pair.
#[pyfunction]
fn weighted_copeland(n: usize, votes: Vec<(f64, f64, f64)>) -> PyResult<Vec<f64>> {
    let votes = votes.into_iter().map(|(a, d, t)| PairVote::new(a, d, t)).collect();
    let votes = PairVotes::new(n, votes).map_err(value_error)?;
    Ok(kendall_core::weighted_copeland(&votes).ranks)
}

/// Concatenates batches; pairs across batches are missing.
#[pyfunction]
fn merge_transformed(batches: Vec<PyRef<'_, PySequence>>) -> PyResult<PySequence> {
    let batches = seqs(&batches);
    let map = kendall_core::BatchMap::from_sequences(&batches).map_err(value_error)?;
    let inner = kendall_core::merge_transformed(&batches, &map).map_err(value_error)?;
    Ok(PySequence { inner })
}

#[pyfunction]
fn jitter_ties(values: Vec<Option<f64>>, seed: u64, scale: f64) -> PyResult<Vec<Option<f64>>> {
    let out = kendall_core::jitter_ties(&ordinal("x", values), seed, scale).map_err(value_error)?;
    Ok(out.values)
}

/// Ranks the columns of `features` (a dict of name -> values) by information
/// about `decision`, a list of numbers or of class labels.
///
/// Returns `[(name, score), ...]` by decreasing score, in nats.
#[pyfunction]
#[pyo3(signature = (features, decision, method="kendall"))]
fn rank_features(
    features: &Bound<'_, PyDict>,
    decision: &Bound<'_, PyAny>,
    method: &str,
) -> PyResult<Vec<(String, f64)>> {
    let method: Method = method.parse().map_err(value_error)?;
    let table = features
        .iter()
        .map(|(k, v)| Ok(ordinal(&k.extract::<String>()?, v.extract()?)))
        .collect::<PyResult<Vec<_>>>()?;
    let decision = match decision.extract::<Vec<Option<f64>>>() {
        Ok(v) => Decision::Numeric(ordinal("decision", v)),
        Err(_) => Decision::Categorical(decision.extract()?),
    };
    let ranking = analysis::rank_features(&table, &decision, method).map_err(value_error)?;
    Ok(ranking.entries)
}

/// Per-replicate estimates for bivariate normal samples, keyed by estimator.
#[pyfunction]
#[pyo3(signature = (r, n, reps, seed=1))]
fn simulate_bivariate<'py>(py: Python<'py>, r: f64, n: usize, reps: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
    let res = analysis::simulate_bivariate(r, n, reps, seed).map_err(value_error)?;
    let out = PyDict::new(py);
    for (name, values) in res.estimators.iter().zip(res.values) {
        out.set_item(name, values)?;
    }
    Ok(out)
}

#[pymodule]
fn kendall(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySequence>()?;
    m.add_function(wrap_pyfunction!(kendall_transform, m)?)?;
    m.add_function(wrap_pyfunction!(pair_at, m)?)?;
    m.add_function(wrap_pyfunction!(pair_index, m)?)?;
    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(mutual_information, m)?)?;
    m.add_function(wrap_pyfunction!(conditional_mi, m)?)?;
    m.add_function(wrap_pyfunction!(interaction_information, m)?)?;
    m.add_function(wrap_pyfunction!(mi_from_tau, m)?)?;
    m.add_function(wrap_pyfunction!(mi_from_rho, m)?)?;
    m.add_function(wrap_pyfunction!(mi_from_auroc, m)?)?;
    m.add_function(wrap_pyfunction!(kendall_tau, m)?)?;
    m.add_function(wrap_pyfunction!(auroc, m)?)?;
    m.add_function(wrap_pyfunction!(copeland_inverse, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_copeland, m)?)?;
    m.add_function(wrap_pyfunction!(merge_transformed, m)?)?;
    m.add_function(wrap_pyfunction!(jitter_ties, m)?)?;
    m.add_function(wrap_pyfunction!(rank_features, m)?)?;
    m.add_function(wrap_pyfunction!(simulate_bivariate, m)?)?;
    Ok(())
}
