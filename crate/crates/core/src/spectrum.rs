//! Sample model for the Bernoulli product model and frequency-of-frequencies
//! statistics.
//!
//! An observation displays a finite set of features, identified by opaque
//! non-negative integers. `n` observations form a [`SampleMatrix`]; every
//! estimator in this crate consumes the sufficient statistics collected in a
//! [`FrequencySpectrum`]: the sample size `n`, the counts `K_{n,r}` of features
//! seen exactly `r` times, their total `K_n`, and the total occurrence count
//! `sum_j X_{n,j}`. Features that never appear are unrepresentable here; unseen
//! features enter only through the `oracle` module where probabilities are
//! known.

use std::collections::{BTreeMap, HashMap};

use crate::error::{Error, Result};

/// One observation: the set of feature identifiers it displays.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IncidenceSample {
    features: Vec<u32>,
}

impl IncidenceSample {
    /// Builds a sample from any iterator of feature ids; duplicates collapse.
    pub fn new(features: impl IntoIterator<Item = u32>) -> Self {
        let mut v: Vec<u32> = features.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self { features: v }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Sorted, duplicate-free feature ids.
    pub fn features(&self) -> &[u32] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn contains(&self, feature: u32) -> bool {
        self.features.binary_search(&feature).is_ok()
    }
}

impl FromIterator<u32> for IncidenceSample {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        Self::new(iter)
    }
}

/// An ordered collection of observations (rows of the binary incidence matrix).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleMatrix {
    samples: Vec<IncidenceSample>,
}

impl SampleMatrix {
    pub fn new(samples: Vec<IncidenceSample>) -> Self {
        Self { samples }
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[IncidenceSample] {
        &self.samples
    }

    /// Per-feature occurrence totals `X_{n,j}` for every feature that appears.
    pub fn feature_totals(&self) -> HashMap<u32, u64> {
        let mut totals = HashMap::new();
        for sample in &self.samples {
            for &f in sample.features() {
                *totals.entry(f).or_insert(0) += 1;
            }
        }
        totals
    }
}

impl FromIterator<IncidenceSample> for SampleMatrix {
    fn from_iter<T: IntoIterator<Item = IncidenceSample>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Frequency-of-frequencies statistics of a sample of size `n`.
///
/// Invariants maintained by construction:
/// - `k_total = sum_r counts_by_frequency[r]`
/// - `occurrence_total = sum_r r * counts_by_frequency[r]`
/// - every stored `r` satisfies `1 <= r <= n`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencySpectrum {
    n: u64,
    counts_by_frequency: BTreeMap<u64, u64>,
    k_total: u64,
    occurrence_total: u64,
}

impl FrequencySpectrum {
    fn from_frequency_counts(n: u64, counts_by_frequency: BTreeMap<u64, u64>) -> Self {
        let k_total = counts_by_frequency.values().sum();
        let occurrence_total = counts_by_frequency.iter().map(|(r, k)| r * k).sum();
        Self {
            n,
            counts_by_frequency,
            k_total,
            occurrence_total,
        }
    }

    /// A spectrum with no observed features (all counts zero).
    pub fn empty(n: u64) -> Self {
        Self::from_frequency_counts(n, BTreeMap::new())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// `K_{n,r}`; absent frequencies are zero.
    pub fn k_r(&self, r: u64) -> u64 {
        self.counts_by_frequency.get(&r).copied().unwrap_or(0)
    }

    pub fn k1(&self) -> u64 {
        self.k_r(1)
    }

    pub fn k2(&self) -> u64 {
        self.k_r(2)
    }

    /// `K_n`, the number of distinct observed features.
    pub fn k_total(&self) -> u64 {
        self.k_total
    }

    /// `sum_j X_{n,j}`, the total number of incidences.
    pub fn occurrence_total(&self) -> u64 {
        self.occurrence_total
    }

    pub fn counts_by_frequency(&self) -> &BTreeMap<u64, u64> {
        &self.counts_by_frequency
    }
}

/// Collects the frequency spectrum of a sample matrix.
pub fn build_spectrum(matrix: &SampleMatrix) -> Result<FrequencySpectrum> {
    if matrix.n() == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    let totals = matrix.feature_totals();
    let mut by_freq = BTreeMap::new();
    for &count in totals.values() {
        *by_freq.entry(count).or_insert(0) += 1;
    }
    Ok(FrequencySpectrum::from_frequency_counts(
        matrix.n() as u64,
        by_freq,
    ))
}

/// Builds a spectrum directly from per-feature occurrence totals, skipping the
/// matrix. Zero counts contribute nothing.
pub fn spectrum_from_counts(counts: &[u64], n: u64) -> Result<FrequencySpectrum> {
    if n == 0 {
        return Err(Error::EmptySample { n: 0, required: 1 });
    }
    let mut by_freq = BTreeMap::new();
    for (index, &count) in counts.iter().enumerate() {
        if count > n {
            return Err(Error::CountOutOfRange { index, count, n });
        }
        if count > 0 {
            *by_freq.entry(count).or_insert(0) += 1;
        }
    }
    Ok(FrequencySpectrum::from_frequency_counts(n, by_freq))
}

/// Number of features displayed by sample `i` and by no other sample:
/// `K_n - K_{n-1}(i)`, the leave-one-out loss of distinct features.
pub fn leave_one_out_gain(matrix: &SampleMatrix, i: usize) -> Result<u64> {
    let n = matrix.n();
    if n < 2 {
        return Err(Error::EmptySample {
            n: n as u64,
            required: 2,
        });
    }
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i, n });
    }
    let totals = matrix.feature_totals();
    Ok(matrix.samples()[i]
        .features()
        .iter()
        .filter(|f| totals[f] == 1)
        .count() as u64)
}

/// Incremental spectrum maintenance for sequential consumption (stopping rule).
///
/// `push` costs O(|sample|); after each push the accumulator agrees with
/// `build_spectrum` on the samples seen so far.
#[derive(Debug, Clone, Default)]
pub struct SpectrumAccumulator {
    n: u64,
    feature_counts: HashMap<u32, u64>,
    by_freq: BTreeMap<u64, u64>,
    k_total: u64,
    occurrence_total: u64,
}

impl SpectrumAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sample: &IncidenceSample) {
        self.n += 1;
        for &f in sample.features() {
            let count = self.feature_counts.entry(f).or_insert(0);
            if *count > 0 {
                let old = self.by_freq.get_mut(count).expect("tracked frequency");
                *old -= 1;
                if *old == 0 {
                    self.by_freq.remove(count);
                }
            } else {
                self.k_total += 1;
            }
            *count += 1;
            *self.by_freq.entry(*count).or_insert(0) += 1;
            self.occurrence_total += 1;
        }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k1(&self) -> u64 {
        self.by_freq.get(&1).copied().unwrap_or(0)
    }

    pub fn k_total(&self) -> u64 {
        self.k_total
    }

    pub fn occurrence_total(&self) -> u64 {
        self.occurrence_total
    }

    /// Snapshot of the current spectrum.
    pub fn spectrum(&self) -> FrequencySpectrum {
        FrequencySpectrum {
            n: self.n,
            counts_by_frequency: self.by_freq.clone(),
            k_total: self.k_total,
            occurrence_total: self.occurrence_total,
        }
    }
}
