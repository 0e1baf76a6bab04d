//! Published reference tables for the Zipf benchmark grids.

/// Bias table: rows by exponent s, columns n = 10, 50, 100, 1000.
pub const BIAS_TABLE: [(f64, [f64; 4]); 6] = [
    (0.6, [1.310, 0.459, 0.241, 0.001]),
    (0.8, [0.268, 0.075, 0.042, 0.003]),
    (1.0, [0.100, 0.020, 0.010, 0.001]),
    (1.2, [0.052, 0.008, 0.004, 0.000]),
    (1.4, [0.033, 0.004, 0.002, 0.000]),
    (1.6, [0.023, 0.002, 0.001, 0.000]),
];

/// Bias^2 / risk * 100: rows by s, columns n = 10, 50, 100, 1000.
pub const SHARE_TABLE: [(f64, [f64; 4]); 6] = [
    (0.6, [16.06, 13.05, 9.57, 0.89]),
    (0.8, [2.99, 1.44, 1.08, 0.19]),
    (1.0, [1.35, 0.34, 0.19, 0.03]),
    (1.2, [0.94, 0.16, 0.07, 0.01]),
    (1.4, [0.76, 0.10, 0.04, 0.00]),
    (1.6, [0.64, 0.07, 0.03, 0.00]),
];

pub const TABLE_NS: [u64; 4] = [10, 50, 100, 1000];

/// Synthetic benchmark: (s, n, mean M_n, mean M_hat, mean CI lower, mean CI upper),
/// averaged over 100 replicates at delta = 0.05.
pub const SYNTHETIC_TABLE: [(f64, u64, f64, f64, f64, f64); 18] = [
    (0.6, 50, 183.81, 184.66, 174.35, 198.12),
    (0.8, 50, 33.79, 33.67, 29.45, 39.51),
    (1.0, 50, 7.02, 7.02, 4.88, 9.91),
    (1.2, 50, 1.92, 1.87, 0.54, 3.60),
    (1.4, 50, 0.71, 0.72, 0.0, 1.98),
    (1.6, 50, 0.34, 0.36, 0.0, 1.39),
    (0.6, 250, 105.38, 105.61, 101.74, 110.53),
    (0.8, 250, 26.40, 26.05, 24.40, 28.30),
    (1.0, 250, 5.41, 5.43, 4.66, 6.49),
    (1.2, 250, 1.35, 1.35, 0.92, 1.93),
    (1.4, 250, 0.44, 0.44, 0.15, 0.81),
    (1.6, 250, 0.18, 0.18, 0.0, 0.46),
    (0.6, 1000, 27.84, 27.89, 26.66, 29.65),
    (0.8, 1000, 17.18, 17.17, 16.47, 18.13),
    (1.0, 1000, 4.04, 4.03, 3.70, 4.48),
    (1.2, 1000, 0.97, 0.97, 0.80, 1.20),
    (1.4, 1000, 0.29, 0.29, 0.19, 0.43),
    (1.6, 1000, 0.12, 0.11, 0.04, 0.21),
];
