//! Population constructors, Bernoulli-product samplers, and the Monte Carlo
//! harness behind the benchmark tables and coverage checks.
//!
//! # Determinism and seeding
//!
//! Every randomized routine takes an explicit 64-bit master seed. Replicate
//! `i` runs on its own `ChaCha8Rng` seeded with
//! `splitmix64(master ^ (i+1) * 0x9E3779B97F4A7C15)`, so replicates are
//! order-independent: the harness may run them in parallel and still produce
//! bit-identical reports, because per-replicate records are collected by index
//! and reduced sequentially. The generator and the derivation scheme are part
//! of the reproducibility contract for a release.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::Serialize;

use crate::confidence::{lower_margin_counts, upper_margin_counts, Variant};
use crate::error::{Error, Result};
use crate::estimators::w_bounds_from_w_hat;
use crate::oracle::{
    exact_bias, exact_risk, exact_variance, expected_missing_mass, risk_upper_bound, Population,
};
use crate::spectrum::{IncidenceSample, SampleMatrix};
use crate::stopping::SampleSource;

/// Default master seed used by the CLI when none is given.
pub const DEFAULT_SEED: u64 = 1729;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Sub-seed for one replicate; documented scheme, stable within a release.
pub fn replicate_seed(master: u64, replicate: u64) -> u64 {
    splitmix64(master ^ replicate.wrapping_add(1).wrapping_mul(0x9E3779B97F4A7C15))
}

/// Fresh generator for one replicate.
pub fn replicate_rng(master: u64, replicate: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(replicate_seed(master, replicate))
}

/// Unnormalized Zipf probabilities `p_j = (j+1)^(-s)` for 0-based `j` (the
/// first feature has `p = 1`), truncated at `n_features`.
pub fn zipf_population(s: f64, n_features: usize) -> Result<Population> {
    if n_features == 0 {
        return Err(Error::invalid_params("zipf population needs >= 1 feature"));
    }
    if s.is_nan() || s < 0.0 {
        return Err(Error::invalid_params(format!(
            "zipf exponent must be >= 0, got {s}"
        )));
    }
    let probs = (1..=n_features).map(|j| (j as f64).powf(-s)).collect();
    Population::new(probs)
}

/// Per-feature binomial samplers for a fixed `(population, n)`; the
/// distribution setup (BINV/BTPE constants) is done once and reused across
/// replicates.
pub struct PopulationSampler<'a> {
    pop: &'a Population,
    n: u64,
    dists: Vec<Binomial>,
}

impl<'a> PopulationSampler<'a> {
    pub fn new(pop: &'a Population, n: u64) -> Self {
        let dists = pop
            .probs()
            .iter()
            .map(|&p| Binomial::new(n, p).expect("population probabilities lie in (0,1]"))
            .collect();
        Self { pop, n, dists }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// One independent `Binomial(n, p_j)` draw per feature, streamed to `f`.
    pub fn for_each_count<R: Rng + ?Sized>(&self, rng: &mut R, mut f: impl FnMut(usize, u64)) {
        for (j, dist) in self.dists.iter().enumerate() {
            f(j, dist.sample(rng));
        }
    }

    /// Sufficient statistics of one replicate.
    fn draw_stats<R: Rng + ?Sized>(&self, rng: &mut R) -> RawReplicate {
        let mut raw = RawReplicate::default();
        let mut seen_mass = 0.0;
        let probs = self.pop.probs();
        self.for_each_count(rng, |j, x| {
            if x > 0 {
                raw.k_n += 1;
                raw.sum_x += x;
                seen_mass += probs[j];
                if x == 1 {
                    raw.k1 += 1;
                } else if x == 2 {
                    raw.k2 += 1;
                }
            }
        });
        raw.m_real = (self.pop.w() - seen_mass).max(0.0);
        raw
    }
}

/// One independent `Binomial(n, p_j)` draw per feature.
pub fn draw_counts<R: Rng + ?Sized>(pop: &Population, n: u64, rng: &mut R) -> Vec<u64> {
    let sampler = PopulationSampler::new(pop, n);
    let mut counts = vec![0u64; pop.len()];
    sampler.for_each_count(rng, |j, x| counts[j] = x);
    counts
}

/// Materializes `n` incidence samples with independent per-cell Bernoulli
/// draws; column sums are distributed as `draw_counts`. Only needed when
/// jackknife or sequential paths are exercised.
pub fn draw_matrix<R: Rng + ?Sized>(pop: &Population, n: u64, rng: &mut R) -> SampleMatrix {
    let mut samples = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut features = Vec::new();
        for (j, &p) in pop.probs().iter().enumerate() {
            if rng.random::<f64>() < p {
                features.push(j as u32);
            }
        }
        samples.push(IncidenceSample::new(features));
    }
    SampleMatrix::new(samples)
}

/// Population family for experiment configs.
#[derive(Debug, Clone)]
pub enum PopulationSpec {
    Zipf { s: f64, features: usize },
    Explicit(Vec<f64>),
}

impl PopulationSpec {
    pub fn build(&self) -> Result<Population> {
        match self {
            PopulationSpec::Zipf { s, features } => zipf_population(*s, *features),
            PopulationSpec::Explicit(probs) => Population::new(probs.clone()),
        }
    }
}

/// One Monte Carlo experiment: `reps` independent replicates of size-`n`
/// sampling from a fixed population, with CIs at level `1 - delta`.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub population: PopulationSpec,
    pub n: u64,
    pub reps: u64,
    pub delta: f64,
    pub seed: u64,
    pub variant: Variant,
}

#[derive(Debug, Clone, Copy, Default)]
struct RawReplicate {
    k1: u64,
    k2: u64,
    k_n: u64,
    sum_x: u64,
    m_real: f64,
}

/// Monte Carlo moments, CI coverage, and the analytic oracle columns for
/// cross-checking.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub n: u64,
    pub reps: u64,
    pub delta: f64,
    pub variant: Variant,
    pub seed: u64,
    pub population_features: usize,
    pub population_w: f64,
    pub m_hat_mean: f64,
    pub m_hat_sd: f64,
    pub m_real_mean: f64,
    pub m_real_sd: f64,
    pub ci_lower_mean: f64,
    pub ci_upper_mean: f64,
    pub coverage: f64,
    pub coverage_se: f64,
    pub w_hat_mean: f64,
    pub w_upper_coverage: f64,
    pub w_lower_coverage: f64,
    pub mse: f64,
    pub mse_se: f64,
    pub expected_missing_mass: f64,
    pub exact_bias: f64,
    pub exact_variance: f64,
    pub exact_risk: f64,
    pub risk_upper_bound: f64,
}

/// Empirical coverage with its binomial standard error.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CoverageOutcome {
    pub delta: f64,
    pub coverage: f64,
    pub se: f64,
    pub reps: u64,
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let len = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / len;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (len - 1.0);
    (mean, var.sqrt())
}

fn validate_experiment(cfg: &ExperimentConfig) -> Result<Population> {
    if cfg.reps == 0 {
        return Err(Error::invalid_params("reps must be >= 1"));
    }
    if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
        return Err(Error::InvalidDelta { delta: cfg.delta });
    }
    if cfg.n < 3 {
        return Err(Error::SampleTooSmall {
            n: cfg.n,
            required: 3,
        });
    }
    cfg.population.build()
}

fn run_raw_replicates(pop: &Population, n: u64, reps: u64, seed: u64) -> Vec<RawReplicate> {
    let sampler = PopulationSampler::new(pop, n);
    (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = replicate_rng(seed, rep);
            sampler.draw_stats(&mut rng)
        })
        .collect()
}

/// Runs the replicates and reports Monte Carlo moments, CI coverage, W-bound
/// coverage, and the exact-oracle columns.
pub fn risk_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let pop = validate_experiment(cfg)?;
    let n = cfg.n;
    let nf = n as f64;
    let raws = run_raw_replicates(&pop, n, cfg.reps, cfg.seed);

    let mut m_hats = Vec::with_capacity(raws.len());
    let mut m_reals = Vec::with_capacity(raws.len());
    let mut lowers = Vec::with_capacity(raws.len());
    let mut uppers = Vec::with_capacity(raws.len());
    let mut w_hats = Vec::with_capacity(raws.len());
    let mut sq_errs = Vec::with_capacity(raws.len());
    let mut covered = 0u64;
    let mut w_up_holds = 0u64;
    let mut w_lo_holds = 0u64;

    for raw in &raws {
        let m_hat = raw.k1 as f64 / nf;
        let lo_margin = lower_margin_counts(raw.k1 as f64, raw.k2 as f64, n, cfg.delta, cfg.variant)
            .expect("validated delta and n");
        let up_margin = upper_margin_counts(raw.k_n as f64, n, cfg.delta, cfg.variant)
            .expect("validated delta and n");
        let lower = (m_hat - lo_margin).max(0.0);
        let upper = m_hat + up_margin;
        if lower <= raw.m_real && raw.m_real <= upper {
            covered += 1;
        }
        let w_hat = raw.sum_x as f64 / nf;
        let wb = w_bounds_from_w_hat(w_hat, n, cfg.delta);
        if pop.w() <= wb.upper {
            w_up_holds += 1;
        }
        if pop.w() >= wb.lower {
            w_lo_holds += 1;
        }
        m_hats.push(m_hat);
        m_reals.push(raw.m_real);
        lowers.push(lower);
        uppers.push(upper);
        w_hats.push(w_hat);
        sq_errs.push((m_hat - raw.m_real) * (m_hat - raw.m_real));
    }

    let reps_f = cfg.reps as f64;
    let (m_hat_mean, m_hat_sd) = mean_sd(&m_hats);
    let (m_real_mean, m_real_sd) = mean_sd(&m_reals);
    let (mse, mse_sd) = mean_sd(&sq_errs);
    let coverage = covered as f64 / reps_f;
    let report = exact_risk(&pop, n);
    Ok(ExperimentReport {
        n,
        reps: cfg.reps,
        delta: cfg.delta,
        variant: cfg.variant,
        seed: cfg.seed,
        population_features: pop.len(),
        population_w: pop.w(),
        m_hat_mean,
        m_hat_sd,
        m_real_mean,
        m_real_sd,
        ci_lower_mean: mean_sd(&lowers).0,
        ci_upper_mean: mean_sd(&uppers).0,
        coverage,
        coverage_se: (coverage * (1.0 - coverage) / reps_f).sqrt(),
        w_hat_mean: mean_sd(&w_hats).0,
        w_upper_coverage: w_up_holds as f64 / reps_f,
        w_lower_coverage: w_lo_holds as f64 / reps_f,
        mse,
        mse_se: mse_sd / reps_f.sqrt(),
        expected_missing_mass: expected_missing_mass(&pop, n),
        exact_bias: exact_bias(&pop, n),
        exact_variance: exact_variance(&pop, n),
        exact_risk: report.risk,
        risk_upper_bound: risk_upper_bound(pop.w(), n),
    })
}

/// Fraction of replicates whose CI contains the realized missing mass.
pub fn coverage_experiment(cfg: &ExperimentConfig) -> Result<CoverageOutcome> {
    let outcomes = {
        let pop = validate_experiment(cfg)?;
        coverage_grid(&pop, cfg.n, cfg.reps, &[cfg.delta], cfg.seed, cfg.variant)?
    };
    Ok(outcomes[0])
}

/// Coverage at several `delta` levels sharing one set of replicate draws (the
/// draws do not depend on `delta`, so levels can be evaluated jointly).
pub fn coverage_grid(
    pop: &Population,
    n: u64,
    reps: u64,
    deltas: &[f64],
    seed: u64,
    variant: Variant,
) -> Result<Vec<CoverageOutcome>> {
    if n < 3 {
        return Err(Error::SampleTooSmall { n, required: 3 });
    }
    if reps == 0 {
        return Err(Error::invalid_params("reps must be >= 1"));
    }
    for &delta in deltas {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDelta { delta });
        }
    }
    let raws = run_raw_replicates(pop, n, reps, seed);
    let nf = n as f64;
    let reps_f = reps as f64;
    Ok(deltas
        .iter()
        .map(|&delta| {
            let mut covered = 0u64;
            for raw in &raws {
                let m_hat = raw.k1 as f64 / nf;
                let lo = lower_margin_counts(raw.k1 as f64, raw.k2 as f64, n, delta, variant)
                    .expect("validated");
                let up =
                    upper_margin_counts(raw.k_n as f64, n, delta, variant).expect("validated");
                let lower = (m_hat - lo).max(0.0);
                if lower <= raw.m_real && raw.m_real <= m_hat + up {
                    covered += 1;
                }
            }
            let coverage = covered as f64 / reps_f;
            CoverageOutcome {
                delta,
                coverage,
                se: (coverage * (1.0 - coverage) / reps_f).sqrt(),
                reps,
            }
        })
        .collect())
}

/// Infinite sequential Bernoulli-product source.
///
/// Per-feature occurrence times form independent Bernoulli processes; the
/// source tracks the next occurrence of every feature in a priority queue and
/// advances it with geometric jumps, so a step costs O(features present)
/// instead of O(all features).
pub struct BernoulliSource {
    probs: Vec<f64>,
    heap: BinaryHeap<Reverse<(u64, u32)>>,
    rng: ChaCha8Rng,
    step: u64,
}

impl BernoulliSource {
    pub fn new(pop: &Population, seed: u64) -> Self {
        let probs = pop.probs().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut heap = BinaryHeap::with_capacity(probs.len());
        for (j, &p) in probs.iter().enumerate() {
            let t = geometric_steps(&mut rng, p);
            heap.push(Reverse((t, j as u32)));
        }
        Self {
            probs,
            heap,
            rng,
            step: 0,
        }
    }
}

/// Trials until the first success of a Bernoulli(p) sequence, inclusive.
fn geometric_steps<R: Rng + ?Sized>(rng: &mut R, p: f64) -> u64 {
    if p >= 1.0 {
        return 1;
    }
    let u = 1.0 - rng.random::<f64>(); // (0, 1]
    let t = (u.ln() / (-p).ln_1p()).floor() + 1.0;
    if t >= 9.0e18 {
        u64::MAX / 2
    } else {
        t as u64
    }
}

impl SampleSource for BernoulliSource {
    fn next_sample(&mut self) -> Option<IncidenceSample> {
        self.step += 1;
        let mut features = Vec::new();
        while let Some(&Reverse((t, j))) = self.heap.peek() {
            if t != self.step {
                break;
            }
            self.heap.pop();
            features.push(j);
            let gap = geometric_steps(&mut self.rng, self.probs[j as usize]);
            self.heap.push(Reverse((self.step.saturating_add(gap), j)));
        }
        Some(IncidenceSample::new(features))
    }
}
