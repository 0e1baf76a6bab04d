//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing tests).
//!
//! Criteria 1 and 2 compare the analytic bias / risk-share grids at the
//! documented N = 10^5 population against published reference cells that are
//! in fact only reproducible with an N = 10^4 truncation (verified here by a
//! companion diagnostic). Those two tests implement the stated check
//! faithfully and are expected to FAIL; the diagnostic output demonstrates
//! that the evaluators reproduce the reference values once the population
//! matches. Everything else is expected to pass.

mod refs;

use std::collections::HashMap;
use std::io::Write as _;
use std::process::Command;

use rand::Rng;

use featmass::confidence::Variant;
use featmass::estimators::{
    eb_estimate, eb_theta_hat, good_turing, jackknife, species_good_turing, w_hat,
    BetaProcessParams,
};
use featmass::oracle::{
    exact_bias, exact_risk, exact_variance, expected_k_r, expected_missing_mass,
    minimax_lower_bound, risk_upper_bound, Population,
};
use featmass::simulate::{
    coverage_grid, draw_matrix, replicate_rng, replicate_seed, risk_experiment, zipf_population,
    BernoulliSource, ExperimentConfig, PopulationSpec, DEFAULT_SEED,
};
use featmass::spectrum::{build_spectrum, spectrum_from_counts, SampleMatrix};
use featmass::stopping::{stopping_time, MatrixSource, Utility};

use featmass_cli::formats::{self, Format};

const BIN: &str = env!("CARGO_BIN_EXE_featmass");

fn round3(x: f64) -> f64 {
    (x * 1000.0).round() / 1000.0
}

#[test]
fn criterion_01_bias_table_deterministic() {
    let n_features = 100_000;
    let mut failures = Vec::new();
    for &(s, published) in refs::BIAS_TABLE.iter() {
        let pop = zipf_population(s, n_features).unwrap();
        for (i, &n) in refs::TABLE_NS.iter().enumerate() {
            let got = round3(exact_bias(&pop, n));
            if (got - published[i]).abs() > 0.0005 + 1e-12 {
                failures.push(format!(
                    "  (s={s}, n={n}): computed {got:.3} vs published {:.3}",
                    published[i]
                ));
            }
        }
    }

    // Diagnostic: the published table matches an N = 10^4 truncation.
    let mut n4_matches = 0;
    let mut n4_boundary = Vec::new();
    for &(s, published) in refs::BIAS_TABLE.iter() {
        let pop = zipf_population(s, 10_000).unwrap();
        for (i, &n) in refs::TABLE_NS.iter().enumerate() {
            let exact = exact_bias(&pop, n);
            if (round3(exact) - published[i]).abs() <= 0.0005 + 1e-12 {
                n4_matches += 1;
            } else {
                n4_boundary.push(format!(
                    "  (s={s}, n={n}): N=1e4 exact {exact:.6} vs published {:.3}",
                    published[i]
                ));
            }
        }
    }
    println!(
        "[criterion 1] diagnostic: N=10^4 reproduces {n4_matches}/24 cells{}",
        if n4_boundary.is_empty() {
            String::new()
        } else {
            format!("; boundary cells:\n{}", n4_boundary.join("\n"))
        }
    );

    if failures.is_empty() {
        println!("[criterion 1] PASS — all 24 bias cells reproduced at N=10^5");
    } else {
        panic!(
            "[criterion 1] FAIL — {} of 24 cells differ at N=10^5 (published table \
             matches N=10^4, see diagnostic):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

#[test]
fn criterion_02_risk_share_table() {
    let n_features = 100_000;
    let mut failures = Vec::new();
    for &(s, published) in refs::SHARE_TABLE.iter() {
        let pop = zipf_population(s, n_features).unwrap();
        for (i, &n) in refs::TABLE_NS.iter().enumerate() {
            let got = exact_risk(&pop, n).bias_share_pct;
            if (got - published[i]).abs() > 0.5 {
                failures.push(format!(
                    "  (s={s}, n={n}): computed {got:.2} vs published {:.2}",
                    published[i]
                ));
            }
        }
    }

    let mut n4_matches = 0;
    for &(s, published) in refs::SHARE_TABLE.iter() {
        let pop = zipf_population(s, 10_000).unwrap();
        for (i, &n) in refs::TABLE_NS.iter().enumerate() {
            if (exact_risk(&pop, n).bias_share_pct - published[i]).abs() <= 0.5 {
                n4_matches += 1;
            }
        }
    }
    println!("[criterion 2] diagnostic: N=10^4 reproduces {n4_matches}/24 cells within 0.5pp");

    if failures.is_empty() {
        println!("[criterion 2] PASS — all 24 risk-share cells within 0.5pp at N=10^5");
    } else {
        panic!(
            "[criterion 2] FAIL — {} of 24 cells differ at N=10^5 (published table \
             matches N=10^4 except one Monte-Carlo-noisy cell):\n{}",
            failures.len(),
            failures.join("\n")
        );
    }
}

#[test]
fn criterion_03_synthetic_benchmark_table() {
    // The published CI columns follow the appendix assembly of the margins;
    // the bench is therefore run with --variant appendix (the CLI default
    // stays theorem).
    let output = Command::new(BIN)
        .args([
            "zipf-bench",
            "--reps",
            "100",
            "--delta",
            "0.05",
            "--variant",
            "appendix",
            "--seed",
            &DEFAULT_SEED.to_string(),
            "--json",
        ])
        .output()
        .expect("run zipf-bench");
    assert!(output.status.success(), "zipf-bench failed: {output:?}");
    let rows: Vec<serde_json::Value> = serde_json::from_slice(&output.stdout).unwrap();
    let by_cell: HashMap<(u64, u64), &serde_json::Value> = rows
        .iter()
        .map(|r| {
            (
                (
                    (r["s"].as_f64().unwrap() * 10.0).round() as u64,
                    r["n"].as_u64().unwrap(),
                ),
                r,
            )
        })
        .collect();

    let tol = |published: f64| (0.05 * published.abs()).max(0.05);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for &(s, n, m_n, m_hat, lo, up) in refs::SYNTHETIC_TABLE.iter() {
        let row = by_cell[&((s * 10.0).round() as u64, n)];
        for (name, published, got) in [
            ("M_n", m_n, row["m_real_mean"].as_f64().unwrap()),
            ("M_hat", m_hat, row["m_hat_mean"].as_f64().unwrap()),
            ("ci_lower", lo, row["ci_lower_mean"].as_f64().unwrap()),
            ("ci_upper", up, row["ci_upper_mean"].as_f64().unwrap()),
        ] {
            let err = (got - published).abs();
            let scale = tol(published);
            worst = worst.max(err / scale);
            if err > scale {
                failures.push(format!(
                    "  (s={s}, n={n}) {name}: got {got:.4}, published {published:.4}, tol {scale:.4}"
                ));
            }
        }
    }
    assert!(
        failures.is_empty(),
        "[criterion 3] FAIL — cells outside tolerance:\n{}",
        failures.join("\n")
    );
    println!(
        "[criterion 3] PASS — all 18 cells (M_n, M_hat, CI) within max(5%, 0.05); \
         worst deviation {:.2}x tolerance",
        worst
    );
}

#[test]
fn criterion_04_coverage_guarantee() {
    let reps = 10_000u64;
    let deltas = [0.05, 0.1];
    let mut cell = 0u64;
    let mut lines = Vec::new();
    for &s in &[0.6, 1.0, 1.6] {
        let pop = zipf_population(s, 100_000).unwrap();
        for &n in &[50u64, 250] {
            let outcomes = coverage_grid(
                &pop,
                n,
                reps,
                &deltas,
                replicate_seed(DEFAULT_SEED, cell),
                Variant::Theorem,
            )
            .unwrap();
            cell += 1;
            for out in outcomes {
                let level = 1.0 - out.delta;
                let floor = level - 3.0 * (out.delta * level / reps as f64).sqrt();
                assert!(
                    out.coverage >= floor,
                    "[criterion 4] FAIL — (s={s}, n={n}, delta={}): coverage {} < {floor:.4}",
                    out.delta,
                    out.coverage
                );
                lines.push(format!(
                    "(s={s}, n={n}, d={}): {:.4}",
                    out.delta, out.coverage
                ));
            }
        }
    }
    println!(
        "[criterion 4] PASS — coverage never statistically below 1-delta at 3-sigma: {}",
        lines.join("  ")
    );
}

#[test]
fn criterion_05_exact_identities() {
    // Jackknife = K_{n,1}/n, bit-exact, on 100 random matrices.
    let pop = zipf_population(0.8, 30).unwrap();
    for k in 0..100u64 {
        let mut rng = replicate_rng(5_000, k);
        let n = 2 + (k % 30);
        let matrix = draw_matrix(&pop, n, &mut rng);
        let spec = build_spectrum(&matrix).unwrap();
        let j = jackknife(&matrix).unwrap();
        let gt = good_turing(&spec).unwrap();
        assert_eq!(j, gt, "[criterion 5] FAIL — jackknife mismatch at run {k}");

        // W_hat * species-GT = M_hat whenever occurrences exist.
        if spec.occurrence_total() > 0 {
            let prod = w_hat(&spec).unwrap() * species_good_turing(&spec).unwrap();
            assert!(
                (prod - gt).abs() <= 1e-9 * (1.0 + gt),
                "[criterion 5] FAIL — factorization off at run {k}: {prod} vs {gt}"
            );
        }
    }

    // Empirical-Bayes plug-in identity across the (alpha, beta) grid.
    let spec = spectrum_from_counts(&[1, 1, 1, 1, 2, 2, 3, 7, 40], 80).unwrap();
    let gt = good_turing(&spec).unwrap();
    let mut checked = 0;
    for ai in 1..=9 {
        for bi in 1..=20 {
            let alpha = ai as f64 / 10.0;
            let beta = bi as f64 / 10.0;
            let theta = eb_theta_hat(&spec, alpha, beta).unwrap();
            let params = BetaProcessParams::new(theta, alpha, beta).unwrap();
            let back = eb_estimate(&params, spec.n()).unwrap();
            assert!(
                (back - gt).abs() <= 1e-9 * gt,
                "[criterion 5] FAIL — EB identity off at alpha={alpha}, beta={beta}"
            );
            checked += 1;
        }
    }
    println!(
        "[criterion 5] PASS — jackknife/factorization on 100 matrices, EB identity on {checked} grid points"
    );
}

#[test]
fn criterion_06_brute_force_oracle() {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs().max(b.abs()));

    let check = |probs: &[f64], n: u32, moments: &brute::BruteMoments, label: &str| {
        let pop = Population::new(probs.to_vec()).unwrap();
        let nu = n as u64;
        assert!(
            close(moments.expected_missing_mass, expected_missing_mass(&pop, nu)),
            "[criterion 6] FAIL — E(M_n) mismatch for {label}"
        );
        assert!(
            close(moments.bias, exact_bias(&pop, nu)),
            "[criterion 6] FAIL — bias mismatch for {label}"
        );
        assert!(
            close(moments.variance, exact_variance(&pop, nu)),
            "[criterion 6] FAIL — variance mismatch for {label}"
        );
        for r in 1..=nu {
            assert!(
                close(
                    moments.expected_k_r[(r - 1) as usize],
                    expected_k_r(&pop, nu, r).unwrap()
                ),
                "[criterion 6] FAIL — E(K_n,{r}) mismatch for {label}"
            );
        }
    };

    // Joint enumeration (no independence shortcut), 5 features x n=4 and a
    // degenerate p=1 case.
    let pop_a = [0.62, 0.341, 0.05, 0.777, 0.213];
    let joint_a = brute::joint(&pop_a, 4);
    check(&pop_a, 4, &joint_a, "joint 5x4");
    let pop_c = [1.0, 0.35, 0.004];
    check(&pop_c, 6, &brute::joint(&pop_c, 6), "joint 3x6 with p=1");
    let pop_d = [0.9, 0.6, 0.31, 0.25, 0.17, 0.08, 0.02, 0.005];
    check(&pop_d, 3, &brute::joint(&pop_d, 3), "joint 8x3");

    // Per-feature exhaustive enumeration up to the 15-feature / n=6 scale.
    let pop_b = [
        0.93, 0.81, 0.66, 0.5, 0.44, 0.37, 0.29, 0.21, 0.18, 0.12, 0.09, 0.05, 0.02, 0.008, 0.001,
    ];
    check(&pop_b, 6, &brute::per_feature(&pop_b, 6), "per-feature 15x6");

    // The two brute-force routes agree with each other.
    let per_a = brute::per_feature(&pop_a, 4);
    assert!(close(per_a.expected_missing_mass, joint_a.expected_missing_mass));
    assert!(close(per_a.bias, joint_a.bias));
    assert!(close(per_a.variance, joint_a.variance));

    println!(
        "[criterion 6] PASS — enumeration reproduces E(M_n), bias, variance, E(K_n,r) to 1e-12"
    );
}

#[test]
fn criterion_07_theorem1_sandwich() {
    // 100 random (population, n) pairs with W in [0.1, 50].
    for k in 0..100u64 {
        let mut rng = replicate_rng(7_000, k);
        let features = rng.random_range(1..=200);
        let target_w: f64 = rng.random_range(0.1..50.0);
        let raw: Vec<f64> = (0..features).map(|_| rng.random_range(1e-6..1.0)).collect();
        let scale = target_w / raw.iter().sum::<f64>();
        let probs: Vec<f64> = raw.iter().map(|u| (u * scale).min(1.0)).collect();
        let pop = Population::new(probs).unwrap();
        if pop.w() < 0.1 {
            continue; // clamping undershot the class; skip this draw
        }
        let n = rng.random_range(2..=400);
        let report = exact_risk(&pop, n);
        let upper = risk_upper_bound(pop.w(), n);
        assert!(
            report.risk <= upper * (1.0 + 1e-12),
            "[criterion 7] FAIL — risk {} above bound {upper} (run {k})",
            report.risk
        );
        let lower = minimax_lower_bound(pop.w(), n).unwrap();
        assert!(
            lower <= upper,
            "[criterion 7] FAIL — sandwich inverted at run {k}"
        );
    }

    // Monte Carlo MSE equals the exact risk within 3 SE at two grid points.
    let mut lines = Vec::new();
    for &(s, n) in &[(1.2, 50u64), (1.6, 50u64)] {
        let cfg = ExperimentConfig {
            population: PopulationSpec::Zipf {
                s,
                features: 100_000,
            },
            n,
            reps: 10_000,
            delta: 0.05,
            seed: replicate_seed(DEFAULT_SEED, 900 + n),
            variant: Variant::Theorem,
        };
        let report = risk_experiment(&cfg).unwrap();
        assert!(
            (report.mse - report.exact_risk).abs() <= 3.0 * report.mse_se,
            "[criterion 7] FAIL — (s={s}, n={n}): MC mse {} vs exact {} (se {})",
            report.mse,
            report.exact_risk,
            report.mse_se
        );
        lines.push(format!(
            "(s={s}, n={n}): mse {:.5} vs exact {:.5}",
            report.mse, report.exact_risk
        ));
    }
    println!(
        "[criterion 7] PASS — sandwich on 100 random populations; MC MSE within 3 SE: {}",
        lines.join("  ")
    );
}

#[test]
fn criterion_08_w_bound_coverage() {
    let cfg = ExperimentConfig {
        population: PopulationSpec::Zipf {
            s: 1.0,
            features: 100_000,
        },
        n: 250,
        reps: 10_000,
        delta: 0.05,
        seed: replicate_seed(DEFAULT_SEED, 777),
        variant: Variant::Theorem,
    };
    let report = risk_experiment(&cfg).unwrap();
    let floor = 0.95 - 3.0 * (0.05f64 * 0.95 / 10_000.0).sqrt();
    assert!(
        report.w_upper_coverage >= floor,
        "[criterion 8] FAIL — upper bound coverage {} < {floor:.4}",
        report.w_upper_coverage
    );
    assert!(
        report.w_lower_coverage >= floor,
        "[criterion 8] FAIL — lower bound coverage {} < {floor:.4}",
        report.w_lower_coverage
    );
    println!(
        "[criterion 8] PASS — W bound coverage: upper {:.4}, lower {:.4} (floor {floor:.4})",
        report.w_upper_coverage, report.w_lower_coverage
    );
}

#[test]
fn criterion_09_format_level_estimate_audit() {
    // Matrices with shared, singleton, and absent features; interior empty
    // sample included. Trailing samples are kept non-empty so the pairs
    // format can represent the matrix.
    let fixtures = [
        "alpha beta\nalpha\n\nalpha gamma delta\nbeta\n",
        "x\nx\nx y\nz x\ny q r s\n",
        "a b c d e\nf\n\n\na f\n",
    ];
    for (i, content) in fixtures.iter().enumerate() {
        let (matrix, interner) = formats::parse(content, Format::List, "fixture").unwrap();

        let mut outputs = Vec::new();
        for format in [Format::List, Format::Csv, Format::Pairs] {
            let encoded = formats::write(&matrix, &interner, format);
            let mut file = tempfile::NamedTempFile::new().unwrap();
            file.write_all(encoded.as_bytes()).unwrap();
            let flag = match format {
                Format::List => "list",
                Format::Csv => "csv",
                Format::Pairs => "pairs",
            };
            let output = Command::new(BIN)
                .args(["estimate", file.path().to_str().unwrap(), "--format", flag, "--json"])
                .output()
                .unwrap();
            assert!(output.status.success(), "estimate failed on {flag}");
            outputs.push(output.stdout);
        }
        assert!(
            outputs[0] == outputs[1] && outputs[1] == outputs[2],
            "[criterion 9] FAIL — JSON reports differ across formats for fixture {i}"
        );

        // Independent recount over the list file: token totals from scratch.
        let mut totals: HashMap<&str, u64> = HashMap::new();
        let mut n_lines = 0u64;
        for line in content.lines() {
            n_lines += 1;
            let mut seen = std::collections::HashSet::new();
            for tok in line.split_whitespace() {
                if seen.insert(tok) {
                    *totals.entry(tok).or_insert(0) += 1;
                }
            }
        }
        let k1 = totals.values().filter(|&&c| c == 1).count() as f64;
        let recount = k1 / n_lines as f64;
        let report: serde_json::Value = serde_json::from_slice(&outputs[0]).unwrap();
        let m_hat = report["m_hat"].as_f64().unwrap();
        assert_eq!(
            m_hat, recount,
            "[criterion 9] FAIL — fixture {i}: m_hat {m_hat} vs recount {recount}"
        );
    }
    println!(
        "[criterion 9] PASS — byte-identical reports across 3 formats; m_hat equals independent recount"
    );
}

#[test]
fn criterion_10_stopping_rule() {
    // Monotonicity in the cost over 50 seeded replays of the same source.
    let pop = zipf_population(1.0, 500).unwrap();
    let costs = [2.0, 1.0, 0.5, 0.25];
    for k in 0..50u64 {
        let mut rng = replicate_rng(10_000, k);
        let matrix = draw_matrix(&pop, 400, &mut rng);
        let mut stars = Vec::new();
        for &c in &costs {
            let mut src = MatrixSource::new(&matrix);
            let out = stopping_time(&mut src, &Utility::Identity, c, 400).unwrap();
            stars.push(out.n_star);
        }
        for w in stars.windows(2) {
            assert!(
                w[0] <= w[1],
                "[criterion 10] FAIL — n* not monotone in c at run {k}: {stars:?}"
            );
        }
    }

    // h = identity criterion is exactly {M_hat_n <= c}, checked against a
    // batch replay, and the incremental spectrum matches the batch one.
    let mut rng = replicate_rng(10_001, 0);
    let matrix = draw_matrix(&pop, 300, &mut rng);
    let c = 0.8;
    let mut src = MatrixSource::new(&matrix);
    let out = stopping_time(&mut src, &Utility::Identity, c, 300).unwrap();
    let mut expected_star = None;
    for n in 1..=300usize {
        let prefix = SampleMatrix::new(matrix.samples()[..n].to_vec());
        let spec = build_spectrum(&prefix).unwrap();
        let m_hat = good_turing(&spec).unwrap();
        let record = &out.trajectory[n - 1];
        assert_eq!(record.m_hat, m_hat);
        assert_eq!(record.k_n, spec.k_total());
        if m_hat <= c {
            expected_star = Some(n as u64);
            break;
        }
    }
    assert_eq!(
        Some(out.n_star),
        expected_star,
        "[criterion 10] FAIL — identity criterion disagrees with batch replay"
    );
    assert!(out.stopped);

    // Frozen regression fixture: Zipf s=1.0, N=1e5, h=identity, c=1.0,
    // 100 seeded simulated runs. Reference median 26475 (observed range
    // 25828..27133), matching the analytic crossing E[M_hat_n] = 1 at
    // n ~ 26475.
    let big = zipf_population(1.0, 100_000).unwrap();
    let mut stars = Vec::new();
    for k in 0..100u64 {
        let mut src = BernoulliSource::new(&big, replicate_seed(1729, k));
        let out = stopping_time(&mut src, &Utility::Identity, 1.0, 60_000).unwrap();
        assert!(out.stopped);
        stars.push(out.n_star);
    }
    stars.sort_unstable();
    let median = stars[49];
    assert!(
        (26_100..=26_900).contains(&median),
        "[criterion 10] FAIL — fixture median {median} outside frozen band 26100..26900"
    );
    println!(
        "[criterion 10] PASS — monotone in c (50 runs); identity criterion equivalence; \
         fixture median {median} within 26100..26900"
    );
}
