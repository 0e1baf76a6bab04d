//! Small numeric helpers shared by the oracle and estimator modules.

/// Neumaier-compensated accumulator. The oracle sums run over 10^5-term
/// populations and must hold to ~1e-12 relative error.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// (1 - p)^k computed as exp(k*log1p(-p)); raw powering loses precision for
/// p near 0 with large k. Exact-zero branch at p = 1 (and (1-1)^0 = 1).
pub(crate) fn pow_one_minus(p: f64, k: u64) -> f64 {
    if k == 0 {
        1.0
    } else if p >= 1.0 {
        0.0
    } else {
        ((k as f64) * (-p).ln_1p()).exp()
    }
}
