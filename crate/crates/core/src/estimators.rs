//! Point estimators of the missing mass and of the total feature mass.
//!
//! The headline estimator is `good_turing`: `M̂_n = K_{n,1}/n`, the number of
//! singleton features over the sample size. It coincides exactly with the
//! jackknife estimator built from leave-one-out feature losses, and with the
//! empirical-Bayes estimator under a three-parameter Beta process prior once
//! the mass parameter is replaced by its consistent estimate. The total mass
//! `W = sum_j p_j` is estimated by `Ŵ_n = sum_j X_{n,j}/n` with closed-form
//! concentration bounds.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{leave_one_out_gain, FrequencySpectrum, SampleMatrix};

/// `M̂_n = K_{n,1}/n`.
///
/// Unlike the species-sampling version this is not bounded by 1; it estimates
/// the expected number of new features the next observation reveals.
pub fn good_turing(spec: &FrequencySpectrum) -> Result<f64> {
    if spec.n() == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    Ok(spec.k1() as f64 / spec.n() as f64)
}

/// Jackknife form: the mean over samples of the number of features lost when
/// that sample is removed. Identical to `good_turing` by the counting identity
/// `sum_i (K_n - K_{n-1}(i)) = K_{n,1}`.
pub fn jackknife(matrix: &SampleMatrix) -> Result<f64> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::EmptySample {
            n: n as u64,
            required: 2,
        });
    }
    let mut total = 0u64;
    for i in 0..n {
        total += leave_one_out_gain(matrix, i)?;
    }
    Ok(total as f64 / n as f64)
}

/// Good-Turing estimator in its species-sampling form, `K_{n,1} / sum_j X_{n,j}`.
/// Always in [0, 1]; multiplying by `Ŵ_n` recovers `good_turing` exactly.
pub fn species_good_turing(spec: &FrequencySpectrum) -> Result<f64> {
    if spec.occurrence_total() == 0 {
        return Err(Error::NoOccurrences);
    }
    Ok(spec.k1() as f64 / spec.occurrence_total() as f64)
}

/// `Ŵ_n = sum_j X_{n,j} / n`, the observed mean number of features per sample.
pub fn w_hat(spec: &FrequencySpectrum) -> Result<f64> {
    if spec.n() == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    Ok(spec.occurrence_total() as f64 / spec.n() as f64)
}

/// Marginal level-(1-delta) bounds on the total mass `W`.
///
/// Each bound holds on its own with probability at least `1 - delta`; they are
/// not a joint interval, so `lower <= upper` is guaranteed by the formulas but
/// no joint coverage level is implied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WBounds {
    pub w_hat: f64,
    pub lower: f64,
    pub upper: f64,
    pub delta: f64,
}

/// Closed-form concentration bounds for `W` around `Ŵ_n`:
/// upper `(sqrt(Ŵ + log(1/δ)/(2n)) + sqrt(log(1/δ)/(2n)))^2`,
/// lower `max(0, sqrt(Ŵ) - sqrt(log(1/δ)/n))^2`.
pub fn w_bounds(spec: &FrequencySpectrum, delta: f64) -> Result<WBounds> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidDelta { delta });
    }
    let w = w_hat(spec)?;
    Ok(w_bounds_from_w_hat(w, spec.n(), delta))
}

pub(crate) fn w_bounds_from_w_hat(w: f64, n: u64, delta: f64) -> WBounds {
    let nf = n as f64;
    let log_term = (1.0 / delta).ln();
    let half = log_term / (2.0 * nf);
    let upper = ((w + half).sqrt() + half.sqrt()).powi(2);
    let lower = (w.sqrt() - (log_term / nf).sqrt()).max(0.0).powi(2);
    WBounds {
        w_hat: w,
        lower,
        upper,
        delta,
    }
}

/// Prior parameters of the three-parameter Beta process.
///
/// Validation enforces `alpha in (0,1)`, `beta > -alpha`, `theta > 0`. (A
/// narrower `beta in (0,1)` appears in one derivation, but the weaker condition
/// is the operative one and is what is enforced here.)
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaProcessParams {
    theta: f64,
    alpha: f64,
    beta: f64,
}

impl BetaProcessParams {
    pub fn new(theta: f64, alpha: f64, beta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::invalid_params(format!(
                "theta must be positive, got {theta}"
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::invalid_params(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if !(beta.is_finite() && beta > -alpha) {
            return Err(Error::invalid_params(format!(
                "beta must exceed -alpha = {}, got {beta}",
                -alpha
            )));
        }
        Ok(Self { theta, alpha, beta })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Bayes point estimate of the missing mass under the three-parameter Beta
/// process: `theta * Gamma(alpha+beta+n) / Gamma(beta+n+1)`, evaluated through
/// log-Gamma differences (the ratio underflows/overflows past n ~ 170 if formed
/// directly).
pub fn eb_estimate(params: &BetaProcessParams, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    let nf = n as f64;
    let log_ratio = libm::lgamma(params.alpha + params.beta + nf)
        - libm::lgamma(params.beta + nf + 1.0);
    Ok(params.theta * log_ratio.exp())
}

/// Consistent estimator of the Beta-process mass parameter:
/// `K_{n,1} * Gamma(beta+n+1) / (Gamma(alpha+beta+n) * n)`. Zero when no
/// singletons were observed.
pub fn eb_theta_hat(spec: &FrequencySpectrum, alpha: f64, beta: f64) -> Result<f64> {
    if spec.n() == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    // Reuse the parameter validation; theta plays no role here.
    BetaProcessParams::new(1.0, alpha, beta)?;
    let nf = spec.n() as f64;
    let log_ratio = libm::lgamma(beta + nf + 1.0) - libm::lgamma(alpha + beta + nf);
    Ok(spec.k1() as f64 * log_ratio.exp() / nf)
}
