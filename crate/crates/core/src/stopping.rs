//! Adaptive stopping rule for sequential feature discovery.
//!
//! Sampling continues while the estimated utility gain of one more sample,
//! `h(K_n + M̂_n) - h(K_n)`, exceeds the per-sample cost `c`. Evaluation starts
//! at n = 1 (`M̂_0` is undefined), so `n* >= 1`; ties (`gain == c`) stop. A
//! mandatory `n_max` guarantees termination on adversarial sources.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::{IncidenceSample, SampleMatrix, SpectrumAccumulator};

/// Provider of observations, consumed one at a time.
pub trait SampleSource {
    /// The next observation, or `None` if the source is exhausted.
    fn next_sample(&mut self) -> Option<IncidenceSample>;
}

/// Replays an in-memory matrix in order.
pub struct MatrixSource<'a> {
    samples: &'a [IncidenceSample],
    next: usize,
}

impl<'a> MatrixSource<'a> {
    pub fn new(matrix: &'a SampleMatrix) -> Self {
        Self {
            samples: matrix.samples(),
            next: 0,
        }
    }
}

impl SampleSource for MatrixSource<'_> {
    fn next_sample(&mut self) -> Option<IncidenceSample> {
        let s = self.samples.get(self.next)?;
        self.next += 1;
        Some(s.clone())
    }
}

/// Utility of having observed `k` features. All variants are non-decreasing
/// and concave on `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Utility {
    Identity,
    Log1p,
    Sqrt,
    /// `x^gamma` with `gamma in (0, 1]`.
    Power(f64),
}

impl Utility {
    pub fn power(gamma: f64) -> Result<Self> {
        if gamma > 0.0 && gamma <= 1.0 {
            Ok(Utility::Power(gamma))
        } else {
            Err(Error::invalid_params(format!(
                "power utility exponent must lie in (0, 1], got {gamma}"
            )))
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Utility::Identity => x,
            Utility::Log1p => x.ln_1p(),
            Utility::Sqrt => x.sqrt(),
            Utility::Power(g) => x.powf(*g),
        }
    }
}

impl std::fmt::Display for Utility {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Utility::Identity => f.write_str("identity"),
            Utility::Log1p => f.write_str("log1p"),
            Utility::Sqrt => f.write_str("sqrt"),
            Utility::Power(g) => write!(f, "power:{g}"),
        }
    }
}

impl std::str::FromStr for Utility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(Utility::Identity),
            "log1p" => Ok(Utility::Log1p),
            "sqrt" => Ok(Utility::Sqrt),
            other => {
                if let Some(gamma) = other.strip_prefix("power:") {
                    let gamma: f64 = gamma.parse().map_err(|_| {
                        Error::invalid_params(format!("bad power exponent in {other:?}"))
                    })?;
                    Utility::power(gamma)
                } else {
                    Err(Error::invalid_params(format!(
                        "unknown utility {other:?}; expected identity, log1p, sqrt or power:<gamma>"
                    )))
                }
            }
        }
    }
}

/// Per-step record of the stopping run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepRecord {
    pub n: u64,
    pub k_n: u64,
    pub m_hat: f64,
    /// `h(K_n + M̂_n) - h(K_n)`.
    pub gain: f64,
}

/// Result of one stopping run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StoppingOutcome {
    /// Samples consumed; the stopping time when `stopped`, otherwise `n_max`.
    pub n_star: u64,
    /// False if `n_max` was reached with the criterion never satisfied.
    pub stopped: bool,
    pub trajectory: Vec<StepRecord>,
}

/// Consumes samples until `h(K_n + M̂_n) - h(K_n) <= c` or `n_max` samples.
pub fn stopping_time<S: SampleSource + ?Sized>(
    source: &mut S,
    h: &Utility,
    c: f64,
    n_max: u64,
) -> Result<StoppingOutcome> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::invalid_params(format!(
            "cost must be positive and finite, got {c}"
        )));
    }
    if n_max == 0 {
        return Err(Error::invalid_params("n_max must be >= 1"));
    }
    let mut acc = SpectrumAccumulator::new();
    let mut trajectory = Vec::new();
    for n in 1..=n_max {
        let sample = source
            .next_sample()
            .ok_or(Error::SourceExhausted { consumed: n - 1 })?;
        acc.push(&sample);
        let k_n = acc.k_total();
        let m_hat = acc.k1() as f64 / n as f64;
        let gain = h.eval(k_n as f64 + m_hat) - h.eval(k_n as f64);
        trajectory.push(StepRecord {
            n,
            k_n,
            m_hat,
            gain,
        });
        if gain <= c {
            return Ok(StoppingOutcome {
                n_star: n,
                stopped: true,
                trajectory,
            });
        }
    }
    Ok(StoppingOutcome {
        n_star: n_max,
        stopped: false,
        trajectory,
    })
}
