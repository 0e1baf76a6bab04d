//! Non-asymptotic level-(1-delta) confidence interval for the missing mass.
//!
//! The interval is `[M̂_n - L_delta(K_{n,1}, K_{n,2}), M̂_n + U_delta(K_n)]`
//! with Bernstein-style margins built from the plug-in bound
//! `c_delta(x) = (sqrt(log(1/δ)/2) + sqrt(7 log(1/δ)/6 + x))^2` on the expected
//! frequency counts. Two assemblies of the margins are shipped:
//!
//! - [`Variant::Theorem`]: the closed forms as usually stated — `c` at level
//!   `delta`, union-bound terms at `log(6/delta)`.
//! - [`Variant::Appendix`]: the proof-style assembly — every sub-event (the
//!   plug-in bounds and the tail bounds) evaluated at level `delta/6`, so six
//!   sub-events of mass `delta/6` make up the stated level. The two also
//!   differ in the placement of the 4/(n(n-1)) and 2/n^2 coefficients; they
//!   are deliberately not reconciled, which makes the discrepancy testable.
//!
//! The margins depend on the sample only through `K_{n,1}`, `K_{n,2}` and
//! `K_n`, so `*_counts` forms are provided for callers that track those counts
//! without materializing a spectrum. `c_delta` accepts non-negative reals, not
//! just integers, so the margins compose with expected-value arguments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::good_turing;
use crate::spectrum::FrequencySpectrum;

/// Which assembly of the Theorem-2 margins to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Theorem,
    Appendix,
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Variant::Theorem => f.write_str("theorem"),
            Variant::Appendix => f.write_str("appendix"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(Variant::Theorem),
            "appendix" => Ok(Variant::Appendix),
            other => Err(Error::invalid_params(format!(
                "unknown variant {other:?}, expected \"theorem\" or \"appendix\""
            ))),
        }
    }
}

/// Two-sided interval for `M_n` at level `1 - delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub point: f64,
    pub lower: f64,
    pub upper: f64,
    pub delta: f64,
    pub variant: Variant,
}

fn check_delta(delta: f64) -> Result<f64> {
    if delta > 0.0 && delta < 1.0 {
        Ok(delta)
    } else {
        Err(Error::InvalidDelta { delta })
    }
}

/// `c_delta(x) = (sqrt(log(1/δ)/2) + sqrt(7 log(1/δ)/6 + x))^2` for `x >= 0`.
pub fn c_delta(x: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    if x.is_nan() || x < 0.0 {
        return Err(Error::invalid_params(format!(
            "c_delta argument must be non-negative, got {x}"
        )));
    }
    let l = (1.0 / delta).ln();
    Ok(((l / 2.0).sqrt() + (7.0 * l / 6.0 + x).sqrt()).powi(2))
}

/// Lower margin `L_delta(K_{n,1}, K_{n,2})` from the raw counts. Needs `n >= 2`.
pub fn lower_margin_counts(k1: f64, k2: f64, n: u64, delta: f64, variant: Variant) -> Result<f64> {
    check_delta(delta)?;
    if n < 2 {
        return Err(Error::SampleTooSmall { n, required: 2 });
    }
    let nf = n as f64;
    match variant {
        Variant::Theorem => {
            let log6 = (6.0 / delta).ln();
            let c1 = c_delta(k1, delta)?;
            let c2 = c_delta(k2, delta)?;
            Ok(2.0 * c2 / (nf * (nf - 1.0))
                + log6 / nf
                + (2.0 * log6 * (4.0 * c1 / (nf * (nf - 1.0)) + 2.0 * c2 / (nf * nf))).sqrt())
        }
        Variant::Appendix => {
            let sub = delta / 6.0;
            let l = (1.0 / sub).ln();
            let c1 = c_delta(k1, sub)?;
            let c2 = c_delta(k2, sub)?;
            let m_hat = 2.0 * c2 / (nf * (nf - 1.0));
            let v_plus = 2.0 * c1 / (nf * nf) + 4.0 * c2 / (nf * (nf - 1.0));
            Ok(m_hat + (2.0 * v_plus * l).sqrt() + l / nf)
        }
    }
}

/// Upper margin `U_delta(K_n)` from the distinct-feature count. Needs `n >= 3`
/// so that the `1 - 2/n` factor stays positive.
pub fn upper_margin_counts(k_n: f64, n: u64, delta: f64, variant: Variant) -> Result<f64> {
    check_delta(delta)?;
    if n < 3 {
        return Err(Error::SampleTooSmall { n, required: 3 });
    }
    let nf = n as f64;
    let denom = (nf - 1.0) * (nf - 1.0) * (1.0 - 2.0 / nf);
    match variant {
        Variant::Theorem => {
            let log6 = (6.0 / delta).ln();
            let ck = c_delta(k_n, delta)?;
            Ok(log6 / (nf - 1.0) + (2.0 * log6 * 4.0 * ck / denom).sqrt())
        }
        Variant::Appendix => {
            let sub = delta / 6.0;
            let l = (1.0 / sub).ln();
            let v_minus = 4.0 * c_delta(k_n, sub)? / denom;
            Ok((2.0 * v_minus * l).sqrt() + l / (nf - 1.0))
        }
    }
}

pub fn lower_margin(spec: &FrequencySpectrum, delta: f64, variant: Variant) -> Result<f64> {
    lower_margin_counts(spec.k1() as f64, spec.k2() as f64, spec.n(), delta, variant)
}

pub fn upper_margin(spec: &FrequencySpectrum, delta: f64, variant: Variant) -> Result<f64> {
    upper_margin_counts(spec.k_total() as f64, spec.n(), delta, variant)
}

/// Interval `[max(0, M̂ - L), M̂ + U]`; the lower endpoint is clamped at zero
/// since the missing mass is non-negative.
pub fn confidence_interval(
    spec: &FrequencySpectrum,
    delta: f64,
    variant: Variant,
) -> Result<ConfidenceInterval> {
    let point = good_turing(spec)?;
    let lower = (point - lower_margin(spec, delta, variant)?).max(0.0);
    let upper = point + upper_margin(spec, delta, variant)?;
    Ok(ConfidenceInterval {
        point,
        lower,
        upper,
        delta,
        variant,
    })
}
