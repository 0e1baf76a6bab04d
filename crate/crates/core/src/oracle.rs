//! Ground-truth quantities available when the feature probabilities are known:
//! realized and expected missing mass, the exact bias/variance/risk of the
//! Good-Turing estimator, and the minimax risk bounds.
//!
//! All sums run over the finite probability vector with compensated
//! accumulation, and `(1-p)^k` is evaluated as `exp(k*log1p(-p))` with an exact
//! zero branch at `p = 1`; the closed forms must reproduce published tables to
//! three decimals over 10^5-term populations.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{pow_one_minus, KahanSum};

/// A finite vector of feature probabilities `p_j in (0, 1]` with cached total
/// mass `W = sum_j p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    probs: Vec<f64>,
    w: f64,
}

impl Population {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        for (i, &p) in probs.iter().enumerate() {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::invalid_params(format!(
                    "probability {p} at position {i} outside (0, 1]"
                )));
            }
        }
        let mut sum = KahanSum::new();
        for &p in &probs {
            sum.add(p);
        }
        let w = sum.value();
        Ok(Self { probs, w })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Total mass `W`.
    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Exact risk decomposition of the Good-Turing estimator at sample size `n`,
/// together with the minimax sandwich evaluated at `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiskReport {
    pub n: u64,
    pub bias: f64,
    pub variance: f64,
    /// `bias^2 + variance`.
    pub risk: f64,
    /// `100 * bias^2 / risk`, or 0 when the risk vanishes.
    pub bias_share_pct: f64,
    /// Worst-case risk bound `W^2/n^2 + (2n+1)W/(n(n+1))`.
    pub upper_bound: f64,
    /// Minimax lower bound `2W/(9(3n+1)) - 14/n^2`; absent for n = 1 where the
    /// bound is not defined, and possibly negative (vacuous) elsewhere.
    pub minimax_lower: Option<f64>,
}

/// `sum_j p_j 1{X_{n,j} = 0}` for an observed count vector.
pub fn realized_missing_mass(pop: &Population, counts: &[u64]) -> Result<f64> {
    if counts.len() != pop.len() {
        return Err(Error::LengthMismatch {
            left: pop.len(),
            right: counts.len(),
        });
    }
    let mut sum = KahanSum::new();
    for (&p, &x) in pop.probs().iter().zip(counts) {
        if x == 0 {
            sum.add(p);
        }
    }
    Ok(sum.value())
}

/// `E(M_n) = sum_j p_j (1-p_j)^n`. For `n = 0` this is `W`.
pub fn expected_missing_mass(pop: &Population, n: u64) -> f64 {
    let mut sum = KahanSum::new();
    for &p in pop.probs() {
        sum.add(p * pow_one_minus(p, n));
    }
    sum.value()
}

/// `E(K_{n,r}) = sum_j C(n,r) p_j^r (1-p_j)^(n-r)`, with the binomial
/// coefficient in log space.
pub fn expected_k_r(pop: &Population, n: u64, r: u64) -> Result<f64> {
    if r < 1 || r > n {
        return Err(Error::InvalidR { r, n });
    }
    let nf = n as f64;
    let rf = r as f64;
    let ln_choose = libm::lgamma(nf + 1.0) - libm::lgamma(rf + 1.0) - libm::lgamma(nf - rf + 1.0);
    let mut sum = KahanSum::new();
    for &p in pop.probs() {
        if p >= 1.0 {
            if r == n {
                sum.add(1.0);
            }
        } else {
            sum.add((ln_choose + rf * p.ln() + (nf - rf) * (-p).ln_1p()).exp());
        }
    }
    Ok(sum.value())
}

/// Exact bias `E(M̂_n - M_n) = sum_j p_j^2 (1-p_j)^(n-1)`; needs `n >= 1`.
pub fn exact_bias(pop: &Population, n: u64) -> f64 {
    assert!(n >= 1, "exact_bias needs n >= 1");
    let mut sum = KahanSum::new();
    for &p in pop.probs() {
        sum.add(p * p * pow_one_minus(p, n - 1));
    }
    sum.value()
}

/// Exact `Var(M̂_n - M_n)`. Per-feature independence gives
/// `sum_j Var(A_j)` with `A_j = 1{X=1}/n - p_j 1{X=0}`, where
/// `E A_j^2 = p(1-p)^(n-1)/n + p^2 (1-p)^n` and `E A_j = p^2 (1-p)^(n-1)`.
pub fn exact_variance(pop: &Population, n: u64) -> f64 {
    assert!(n >= 1, "exact_variance needs n >= 1");
    let nf = n as f64;
    let mut sum = KahanSum::new();
    for &p in pop.probs() {
        let q_nm1 = pow_one_minus(p, n - 1);
        let q_n = pow_one_minus(p, n);
        let second_moment = p * q_nm1 / nf + p * p * q_n;
        let mean = p * p * q_nm1;
        sum.add(second_moment - mean * mean);
    }
    sum.value()
}

/// Assembles bias, variance, risk and the minimax sandwich at `W = pop.w()`.
pub fn exact_risk(pop: &Population, n: u64) -> RiskReport {
    assert!(n >= 1, "exact_risk needs n >= 1");
    let bias = exact_bias(pop, n);
    let variance = exact_variance(pop, n);
    let risk = bias * bias + variance;
    let bias_share_pct = if risk > 0.0 {
        100.0 * bias * bias / risk
    } else {
        0.0
    };
    // An empty population has zero risk and a zero worst-case bound.
    let upper_bound = if pop.is_empty() {
        0.0
    } else {
        risk_upper_bound(pop.w(), n)
    };
    RiskReport {
        n,
        bias,
        variance,
        risk,
        bias_share_pct,
        upper_bound,
        minimax_lower: minimax_lower_bound(pop.w(), n).ok(),
    }
}

/// Worst-case risk of the Good-Turing estimator over populations with total
/// mass at most `w`: `w^2/n^2 + (2n+1)w/(n(n+1))`.
pub fn risk_upper_bound(w: f64, n: u64) -> f64 {
    assert!(n >= 1 && w > 0.0, "risk_upper_bound needs n >= 1, w > 0");
    let nf = n as f64;
    w * w / (nf * nf) + (2.0 * nf + 1.0) * w / (nf * (nf + 1.0))
}

/// Minimax lower bound `2w/(9(3n+1)) - 14/n^2`. Not clamped at zero: callers
/// decide how to present vacuous (negative) values.
pub fn minimax_lower_bound(w: f64, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::SampleTooSmall { n, required: 2 });
    }
    let nf = n as f64;
    Ok(2.0 * w / (9.0 * (3.0 * nf + 1.0)) - 14.0 / (nf * nf))
}
