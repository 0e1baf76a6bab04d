//! Good-Turing missing-mass estimation for feature allocation models.
//!
//! Observations under the Bernoulli product model display arbitrary finite
//! sets of features with unknown per-feature probabilities. The missing mass
//! `M_n` is the total probability of the features unseen after `n` samples —
//! the expected number of new features the next observation would reveal.
//! This crate provides:
//!
//! - [`spectrum`]: the incidence-sample data model and the
//!   frequency-of-frequencies statistics every estimator consumes;
//! - [`estimators`]: the Good-Turing estimator `K_{n,1}/n`, its jackknife and
//!   empirical-Bayes forms, and the total-mass estimator `Ŵ_n` with
//!   concentration bounds;
//! - [`confidence`]: non-asymptotic level-(1-δ) confidence intervals for the
//!   missing mass, in both published assemblies of the margins;
//! - [`oracle`]: exact bias/variance/risk and minimax bounds when the
//!   population is known;
//! - [`simulate`]: deterministic, parallel Monte Carlo experiments over Zipf
//!   and explicit populations;
//! - [`stopping`]: the sequential stopping rule for cost-effective feature
//!   discovery.

pub mod confidence;
pub mod error;
pub mod estimators;
mod numeric;
pub mod oracle;
pub mod simulate;
pub mod spectrum;
pub mod stopping;

pub use error::{Error, Result};
