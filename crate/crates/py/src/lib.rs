//! Python bindings: `import featmass`.
//!
//! Exposes the spectrum/population types and the estimator, confidence,
//! oracle, simulation and stopping operations. Reports cross the boundary as
//! plain dicts; errors surface as `ValueError`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use featmass::confidence::{self, Variant};
use featmass::estimators;
use featmass::oracle;
use featmass::simulate::{self, ExperimentConfig, PopulationSpec};
use featmass::spectrum::{self, FrequencySpectrum, IncidenceSample, SampleMatrix};
use featmass::stopping::{self, MatrixSource, StoppingOutcome, Utility};

fn err(e: featmass::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(s: &str) -> PyResult<Variant> {
    s.parse().map_err(err)
}

fn parse_utility(s: &str) -> PyResult<Utility> {
    s.parse().map_err(err)
}

fn matrix_from_lists(samples: Vec<Vec<u32>>) -> SampleMatrix {
    SampleMatrix::new(samples.into_iter().map(IncidenceSample::new).collect())
}

/// Frequency-of-frequencies statistics of an incidence sample.
#[pyclass(frozen)]
struct Spectrum {
    inner: FrequencySpectrum,
}

#[pymethods]
impl Spectrum {
    /// Build from a list of samples, each a list of integer feature ids.
    #[staticmethod]
    fn from_samples(samples: Vec<Vec<u32>>) -> PyResult<Self> {
        let matrix = matrix_from_lists(samples);
        Ok(Spectrum {
            inner: spectrum::build_spectrum(&matrix).map_err(err)?,
        })
    }

    /// Build from per-feature occurrence totals.
    #[staticmethod]
    fn from_counts(counts: Vec<u64>, n: u64) -> PyResult<Self> {
        Ok(Spectrum {
            inner: spectrum::spectrum_from_counts(&counts, n).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> u64 {
        self.inner.n()
    }

    #[getter]
    fn k_total(&self) -> u64 {
        self.inner.k_total()
    }

    #[getter]
    fn occurrence_total(&self) -> u64 {
        self.inner.occurrence_total()
    }

    fn k_r(&self, r: u64) -> u64 {
        self.inner.k_r(r)
    }

    /// Dict r -> K_{n,r} over observed frequencies.
    fn counts(&self) -> std::collections::BTreeMap<u64, u64> {
        self.inner.counts_by_frequency().clone()
    }

    fn __repr__(&self) -> String {
        format!(
            "Spectrum(n={}, k_total={}, occurrences={})",
            self.inner.n(),
            self.inner.k_total(),
            self.inner.occurrence_total()
        )
    }
}

/// Known feature probabilities (ground truth for oracles and simulation).
#[pyclass(frozen, name = "Population")]
struct PyPopulation {
    inner: oracle::Population,
}

#[pymethods]
impl PyPopulation {
    #[new]
    fn new(probs: Vec<f64>) -> PyResult<Self> {
        Ok(PyPopulation {
            inner: oracle::Population::new(probs).map_err(err)?,
        })
    }

    /// Unnormalized Zipf: p_j = 1/j^s for j = 1..=features.
    #[staticmethod]
    fn zipf(s: f64, features: usize) -> PyResult<Self> {
        Ok(PyPopulation {
            inner: simulate::zipf_population(s, features).map_err(err)?,
        })
    }

    #[getter]
    fn w(&self) -> f64 {
        self.inner.w()
    }

    fn probs(&self) -> Vec<f64> {
        self.inner.probs().to_vec()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Population(features={}, w={})", self.inner.len(), self.inner.w())
    }
}

#[pyfunction]
fn good_turing(spec: PyRef<'_, Spectrum>) -> PyResult<f64> {
    estimators::good_turing(&spec.inner).map_err(err)
}

#[pyfunction]
fn species_good_turing(spec: PyRef<'_, Spectrum>) -> PyResult<f64> {
    estimators::species_good_turing(&spec.inner).map_err(err)
}

#[pyfunction]
fn w_hat(spec: PyRef<'_, Spectrum>) -> PyResult<f64> {
    estimators::w_hat(&spec.inner).map_err(err)
}

#[pyfunction]
fn jackknife(samples: Vec<Vec<u32>>) -> PyResult<f64> {
    estimators::jackknife(&matrix_from_lists(samples)).map_err(err)
}

#[pyfunction]
fn w_bounds<'py>(
    py: Python<'py>,
    spec: PyRef<'_, Spectrum>,
    delta: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let wb = estimators::w_bounds(&spec.inner, delta).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("w_hat", wb.w_hat)?;
    d.set_item("lower", wb.lower)?;
    d.set_item("upper", wb.upper)?;
    d.set_item("delta", wb.delta)?;
    Ok(d)
}

#[pyfunction]
fn eb_estimate(theta: f64, alpha: f64, beta: f64, n: u64) -> PyResult<f64> {
    let params = estimators::BetaProcessParams::new(theta, alpha, beta).map_err(err)?;
    estimators::eb_estimate(&params, n).map_err(err)
}

#[pyfunction]
fn eb_theta_hat(spec: PyRef<'_, Spectrum>, alpha: f64, beta: f64) -> PyResult<f64> {
    estimators::eb_theta_hat(&spec.inner, alpha, beta).map_err(err)
}

#[pyfunction]
fn c_delta(x: f64, delta: f64) -> PyResult<f64> {
    confidence::c_delta(x, delta).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (spec, delta=0.05, variant="theorem"))]
fn confidence_interval<'py>(
    py: Python<'py>,
    spec: PyRef<'_, Spectrum>,
    delta: f64,
    variant: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let ci = confidence::confidence_interval(&spec.inner, delta, parse_variant(variant)?)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("point", ci.point)?;
    d.set_item("lower", ci.lower)?;
    d.set_item("upper", ci.upper)?;
    d.set_item("delta", ci.delta)?;
    d.set_item("variant", ci.variant.to_string())?;
    Ok(d)
}

#[pyfunction]
fn realized_missing_mass(pop: PyRef<'_, PyPopulation>, counts: Vec<u64>) -> PyResult<f64> {
    oracle::realized_missing_mass(&pop.inner, &counts).map_err(err)
}

#[pyfunction]
fn expected_missing_mass(pop: PyRef<'_, PyPopulation>, n: u64) -> f64 {
    oracle::expected_missing_mass(&pop.inner, n)
}

#[pyfunction]
fn expected_k_r(pop: PyRef<'_, PyPopulation>, n: u64, r: u64) -> PyResult<f64> {
    oracle::expected_k_r(&pop.inner, n, r).map_err(err)
}

fn need_positive_n(n: u64) -> PyResult<()> {
    if n == 0 {
        return Err(PyValueError::new_err("n must be >= 1"));
    }
    Ok(())
}

#[pyfunction]
fn exact_bias(pop: PyRef<'_, PyPopulation>, n: u64) -> PyResult<f64> {
    need_positive_n(n)?;
    Ok(oracle::exact_bias(&pop.inner, n))
}

#[pyfunction]
fn exact_variance(pop: PyRef<'_, PyPopulation>, n: u64) -> PyResult<f64> {
    need_positive_n(n)?;
    Ok(oracle::exact_variance(&pop.inner, n))
}

#[pyfunction]
fn exact_risk<'py>(
    py: Python<'py>,
    pop: PyRef<'_, PyPopulation>,
    n: u64,
) -> PyResult<Bound<'py, PyDict>> {
    need_positive_n(n)?;
    let r = oracle::exact_risk(&pop.inner, n);
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("bias", r.bias)?;
    d.set_item("variance", r.variance)?;
    d.set_item("risk", r.risk)?;
    d.set_item("bias_share_pct", r.bias_share_pct)?;
    d.set_item("upper_bound", r.upper_bound)?;
    d.set_item("minimax_lower", r.minimax_lower)?;
    Ok(d)
}

#[pyfunction]
fn risk_upper_bound(w: f64, n: u64) -> PyResult<f64> {
    need_positive_n(n)?;
    if w.is_nan() || w <= 0.0 {
        return Err(PyValueError::new_err("w must be positive"));
    }
    Ok(oracle::risk_upper_bound(w, n))
}

#[pyfunction]
fn minimax_lower_bound(w: f64, n: u64) -> PyResult<f64> {
    oracle::minimax_lower_bound(w, n).map_err(err)
}

#[pyfunction]
fn draw_counts(pop: PyRef<'_, PyPopulation>, n: u64, seed: u64) -> PyResult<Vec<u64>> {
    need_positive_n(n)?;
    let mut rng = simulate::replicate_rng(seed, 0);
    Ok(simulate::draw_counts(&pop.inner, n, &mut rng))
}

fn experiment_config(
    pop: &PyPopulation,
    n: u64,
    reps: u64,
    delta: f64,
    seed: u64,
    variant: &str,
) -> PyResult<ExperimentConfig> {
    Ok(ExperimentConfig {
        population: PopulationSpec::Explicit(pop.inner.probs().to_vec()),
        n,
        reps,
        delta,
        seed,
        variant: parse_variant(variant)?,
    })
}

#[pyfunction]
#[pyo3(signature = (pop, n, reps, delta=0.05, seed=simulate::DEFAULT_SEED, variant="theorem"))]
fn risk_experiment<'py>(
    py: Python<'py>,
    pop: PyRef<'_, PyPopulation>,
    n: u64,
    reps: u64,
    delta: f64,
    seed: u64,
    variant: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = experiment_config(&pop, n, reps, delta, seed, variant)?;
    let r = simulate::risk_experiment(&cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("reps", r.reps)?;
    d.set_item("delta", r.delta)?;
    d.set_item("variant", r.variant.to_string())?;
    d.set_item("seed", r.seed)?;
    d.set_item("population_features", r.population_features)?;
    d.set_item("population_w", r.population_w)?;
    d.set_item("m_hat_mean", r.m_hat_mean)?;
    d.set_item("m_hat_sd", r.m_hat_sd)?;
    d.set_item("m_real_mean", r.m_real_mean)?;
    d.set_item("m_real_sd", r.m_real_sd)?;
    d.set_item("ci_lower_mean", r.ci_lower_mean)?;
    d.set_item("ci_upper_mean", r.ci_upper_mean)?;
    d.set_item("coverage", r.coverage)?;
    d.set_item("coverage_se", r.coverage_se)?;
    d.set_item("w_hat_mean", r.w_hat_mean)?;
    d.set_item("w_upper_coverage", r.w_upper_coverage)?;
    d.set_item("w_lower_coverage", r.w_lower_coverage)?;
    d.set_item("mse", r.mse)?;
    d.set_item("mse_se", r.mse_se)?;
    d.set_item("expected_missing_mass", r.expected_missing_mass)?;
    d.set_item("exact_bias", r.exact_bias)?;
    d.set_item("exact_variance", r.exact_variance)?;
    d.set_item("exact_risk", r.exact_risk)?;
    d.set_item("risk_upper_bound", r.risk_upper_bound)?;
    Ok(d)
}

#[pyfunction]
#[pyo3(signature = (pop, n, reps, delta=0.05, seed=simulate::DEFAULT_SEED, variant="theorem"))]
fn coverage_experiment<'py>(
    py: Python<'py>,
    pop: PyRef<'_, PyPopulation>,
    n: u64,
    reps: u64,
    delta: f64,
    seed: u64,
    variant: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = experiment_config(&pop, n, reps, delta, seed, variant)?;
    let out = simulate::coverage_experiment(&cfg).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("delta", out.delta)?;
    d.set_item("coverage", out.coverage)?;
    d.set_item("se", out.se)?;
    d.set_item("reps", out.reps)?;
    Ok(d)
}

fn stopping_dict<'py>(
    py: Python<'py>,
    out: &StoppingOutcome,
    include_trajectory: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("n_star", out.n_star)?;
    d.set_item("stopped", out.stopped)?;
    d.set_item("final_gain", out.trajectory.last().map(|r| r.gain))?;
    if include_trajectory {
        let steps: Vec<Bound<'py, PyDict>> = out
            .trajectory
            .iter()
            .map(|r| {
                let step = PyDict::new(py);
                step.set_item("n", r.n)?;
                step.set_item("k_n", r.k_n)?;
                step.set_item("m_hat", r.m_hat)?;
                step.set_item("gain", r.gain)?;
                Ok(step)
            })
            .collect::<PyResult<_>>()?;
        d.set_item("trajectory", steps)?;
    }
    Ok(d)
}

/// Run the stopping rule over an in-memory list of samples.
#[pyfunction]
#[pyo3(signature = (samples, cost, n_max, utility="identity", include_trajectory=false))]
fn stopping_time<'py>(
    py: Python<'py>,
    samples: Vec<Vec<u32>>,
    cost: f64,
    n_max: u64,
    utility: &str,
    include_trajectory: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let matrix = matrix_from_lists(samples);
    let mut source = MatrixSource::new(&matrix);
    let out = stopping::stopping_time(&mut source, &parse_utility(utility)?, cost, n_max)
        .map_err(err)?;
    stopping_dict(py, &out, include_trajectory)
}

/// Run the stopping rule over a simulated Bernoulli-product source.
#[pyfunction]
#[pyo3(signature = (pop, cost, n_max, seed=simulate::DEFAULT_SEED, utility="identity", include_trajectory=false))]
fn stopping_time_simulated<'py>(
    py: Python<'py>,
    pop: PyRef<'_, PyPopulation>,
    cost: f64,
    n_max: u64,
    seed: u64,
    utility: &str,
    include_trajectory: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let mut source = simulate::BernoulliSource::new(&pop.inner, seed);
    let out = stopping::stopping_time(&mut source, &parse_utility(utility)?, cost, n_max)
        .map_err(err)?;
    stopping_dict(py, &out, include_trajectory)
}

#[pymodule]
#[pyo3(name = "featmass")]
fn featmass_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("DEFAULT_SEED", simulate::DEFAULT_SEED)?;
    m.add_class::<Spectrum>()?;
    m.add_class::<PyPopulation>()?;
    m.add_function(wrap_pyfunction!(good_turing, m)?)?;
    m.add_function(wrap_pyfunction!(species_good_turing, m)?)?;
    m.add_function(wrap_pyfunction!(w_hat, m)?)?;
    m.add_function(wrap_pyfunction!(jackknife, m)?)?;
    m.add_function(wrap_pyfunction!(w_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(eb_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(eb_theta_hat, m)?)?;
    m.add_function(wrap_pyfunction!(c_delta, m)?)?;
    m.add_function(wrap_pyfunction!(confidence_interval, m)?)?;
    m.add_function(wrap_pyfunction!(realized_missing_mass, m)?)?;
    m.add_function(wrap_pyfunction!(expected_missing_mass, m)?)?;
    m.add_function(wrap_pyfunction!(expected_k_r, m)?)?;
    m.add_function(wrap_pyfunction!(exact_bias, m)?)?;
    m.add_function(wrap_pyfunction!(exact_variance, m)?)?;
    m.add_function(wrap_pyfunction!(exact_risk, m)?)?;
    m.add_function(wrap_pyfunction!(risk_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(minimax_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(draw_counts, m)?)?;
    m.add_function(wrap_pyfunction!(risk_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(stopping_time, m)?)?;
    m.add_function(wrap_pyfunction!(stopping_time_simulated, m)?)?;
    Ok(())
}
