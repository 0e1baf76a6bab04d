//! Machine- and human-readable records emitted by the subcommands.

use serde::Serialize;

use featmass::confidence::{confidence_interval, Variant};
use featmass::estimators::{good_turing, w_bounds, w_hat};
use featmass::oracle::RiskReport;
use featmass::simulate::ExperimentReport;
use featmass::spectrum::FrequencySpectrum;

use crate::error::CliResult;

/// The `estimate` record. Field order is part of the output schema.
#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub n: u64,
    pub k_n: u64,
    pub k_n1: u64,
    pub k_n2: u64,
    pub m_hat: f64,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
    pub w_hat: f64,
    pub w_lower: f64,
    pub w_upper: f64,
    pub delta: f64,
    pub variant: Variant,
    pub warning: Option<String>,
}

impl EstimateReport {
    pub fn build(spec: &FrequencySpectrum, delta: f64, variant: Variant) -> CliResult<Self> {
        let m_hat = good_turing(spec)?;
        let wb = w_bounds(spec, delta)?;
        let (ci_lower, ci_upper, warning) = if spec.n() >= 3 {
            let ci = confidence_interval(spec, delta, variant)?;
            (Some(ci.lower), Some(ci.upper), None)
        } else {
            (
                None,
                None,
                Some(format!(
                    "confidence interval requires n >= 3 (n = {}); point estimate only",
                    spec.n()
                )),
            )
        };
        Ok(EstimateReport {
            n: spec.n(),
            k_n: spec.k_total(),
            k_n1: spec.k1(),
            k_n2: spec.k2(),
            m_hat,
            ci_lower,
            ci_upper,
            w_hat: w_hat(spec)?,
            w_lower: wb.lower,
            w_upper: wb.upper,
            delta,
            variant,
            warning,
        })
    }

    pub fn render_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n            {}\n", self.n));
        out.push_str(&format!("K_n          {}\n", self.k_n));
        out.push_str(&format!("K_n,1        {}\n", self.k_n1));
        out.push_str(&format!("K_n,2        {}\n", self.k_n2));
        out.push_str(&format!("M_hat        {:.6}\n", self.m_hat));
        match (self.ci_lower, self.ci_upper) {
            (Some(lo), Some(up)) => {
                out.push_str(&format!(
                    "{:.0}% CI       ({:.6}, {:.6})  [{}]\n",
                    100.0 * (1.0 - self.delta),
                    lo,
                    up,
                    self.variant
                ));
            }
            _ => out.push_str("CI           (unavailable)\n"),
        }
        out.push_str(&format!("W_hat        {:.6}\n", self.w_hat));
        out.push_str(&format!(
            "W bounds     ({:.6}, {:.6})\n",
            self.w_lower, self.w_upper
        ));
        if let Some(w) = &self.warning {
            out.push_str(&format!("warning      {w}\n"));
        }
        out
    }
}

/// One row of the analytic bias/risk table.
#[derive(Debug, Serialize)]
pub struct BiasRow {
    pub s: f64,
    pub n: u64,
    pub bias: f64,
    pub variance: f64,
    pub risk: f64,
    pub bias_share_pct: f64,
    pub risk_upper_bound: f64,
    pub minimax_lower: Option<f64>,
}

impl BiasRow {
    pub fn new(s: f64, report: &RiskReport) -> Self {
        BiasRow {
            s,
            n: report.n,
            bias: report.bias,
            variance: report.variance,
            risk: report.risk,
            bias_share_pct: report.bias_share_pct,
            risk_upper_bound: report.upper_bound,
            minimax_lower: report.minimax_lower,
        }
    }
}

pub fn render_bias_tables(rows: &[BiasRow], s_values: &[f64], n_values: &[u64]) -> String {
    let cell = |s: f64, n: u64| rows.iter().find(|r| r.s == s && r.n == n).unwrap();
    let mut out = String::new();
    out.push_str("Bias of M_hat\n");
    out.push_str(&format!("{:>5}", "s"));
    for &n in n_values {
        out.push_str(&format!("  {:>8}", format!("n={n}")));
    }
    out.push('\n');
    for &s in s_values {
        out.push_str(&format!("{s:>5.2}"));
        for &n in n_values {
            out.push_str(&format!("  {:>8.3}", cell(s, n).bias));
        }
        out.push('\n');
    }
    out.push_str("\nBias^2 / risk * 100\n");
    out.push_str(&format!("{:>5}", "s"));
    for &n in n_values {
        out.push_str(&format!("  {:>8}", format!("n={n}")));
    }
    out.push('\n');
    for &s in s_values {
        out.push_str(&format!("{s:>5.2}"));
        for &n in n_values {
            out.push_str(&format!("  {:>8.2}", cell(s, n).bias_share_pct));
        }
        out.push('\n');
    }
    out
}

/// One cell of the Monte Carlo benchmark grid.
#[derive(Debug, Serialize)]
pub struct BenchRow {
    pub s: f64,
    #[serde(flatten)]
    pub report: ExperimentReport,
}

pub fn render_bench_table(rows: &[BenchRow]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:>5} {:>6}  {:>10} {:>10}  {:>23}  {:>8}  {:>10}\n",
        "s", "n", "M_n", "M_hat", "CI(mean)", "coverage", "E[M_n]"
    ));
    for row in rows {
        let r = &row.report;
        out.push_str(&format!(
            "{:>5.2} {:>6}  {:>10.4} {:>10.4}  ({:>9.4}, {:>9.4})  {:>8.4}  {:>10.4}\n",
            row.s,
            r.n,
            r.m_real_mean,
            r.m_hat_mean,
            r.ci_lower_mean,
            r.ci_upper_mean,
            r.coverage,
            r.expected_missing_mass
        ));
    }
    out
}
