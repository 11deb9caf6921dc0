//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Exits 0 after reporting unless `RMI_ACCEPTANCE_STRICT=1`, in which case any
//! FAIL makes the process exit 1.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use rmi_cli::svg::{render, RenderSpec};
use rmi_core::divisor::{z_count, z_count_bruteforce, BRUTE_FORCE_GUARD};
use rmi_core::experiments::{
    predicted_dimension_limit, run_experiment, write_csv, write_jsonl, ExperimentConfig,
    ExperimentName, ExperimentOutcome, Table1Mode, TrialRecord,
};
use rmi_core::pairs::{brute_force_standard_pairs, degree_by_restrictions, enumerate_standard_pairs};
use rmi_core::sampler::{
    count_monomials_up_to, prob_minimal_generator, prob_not_in_ideal, rank_monomial, sample_ideal,
    sample_raw,
};
use rmi_core::{Monomial, ModelParams, PSpec};

struct Report {
    failures: usize,
}

impl Report {
    fn record(&mut self, id: &str, title: &str, passed: bool, detail: String, elapsed: Duration) {
        let tag = if passed { "PASS" } else { "FAIL" };
        println!("{tag} [{id}] {title}: {detail} ({:.2}s)", elapsed.as_secs_f64());
        self.failures += !passed as usize;
    }
}

fn fraction(out: &ExperimentOutcome, key: &str) -> Vec<f64> {
    out.summaries
        .iter()
        .map(|r| r.fractions.get(key).map_or(f64::NAN, |f| f.value))
        .collect()
}

fn non_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] >= w[0])
}

fn band_config(name: ExperimentName) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(name);
    cfg.n = 2;
    cfg.k = Some(0.5);
    cfg.epsilon = Some(0.2);
    cfg.d_grid = vec![100, 1_000, 10_000];
    cfg.trials = 100;
    cfg.seed = 0;
    cfg
}

fn record_violations(records: &[TrialRecord]) -> usize {
    records
        .iter()
        .filter(|r| {
            r.deg != r.sp_by_dim[r.dim]
                || r.sp_by_dim[r.dim + 1..].iter().any(|&c| c != 0)
                || r.adeg != r.sp_by_dim.iter().sum::<u64>()
        })
        .count()
}

fn table1(report: &mut Report) {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentName::Table1);
    cfg.mode = Table1Mode::Verify;
    let (passed, detail) = match run_experiment(&cfg) {
        Ok(out) => {
            let rows: Vec<String> = out
                .table1
                .iter()
                .map(|r| format!("({},{},{},{},{})", r.dim, r.deg, r.sp[0], r.sp[1], r.sp[2]))
                .collect();
            let exact = out.table1.len() == 6 && out.table1.iter().all(|r| r.matches == Some(true));
            (exact, rows.join(" "))
        }
        Err(e) => (false, e.to_string()),
    };
    let elapsed = start.elapsed();
    let passed = passed && elapsed < Duration::from_secs(60);
    report.record("1", "table 1 replication", passed, detail, elapsed);
}

fn oracle(report: &mut Report) {
    let start = Instant::now();
    let (mut checked, mut mismatches, mut errors) = (0, 0, 0);
    let mut seed = 0;
    for n in [2usize, 3] {
        for d in 2..=12u64 {
            for p in [0.1, 0.3] {
                let params = ModelParams::new(n, d, p, seed).unwrap();
                seed += 1;
                for trial in 0..12 {
                    let (ideal, _) = sample_ideal(&params, trial).unwrap();
                    let bound = (0..n).map(|i| ideal.max_exponent(i)).max().unwrap_or(0).max(1);
                    match (enumerate_standard_pairs(&ideal), brute_force_standard_pairs(&ideal, bound)) {
                        (Ok(mut fast), Ok(slow)) => {
                            fast.pairs.sort();
                            mismatches += (fast != slow) as usize;
                        }
                        _ => errors += 1,
                    }
                    checked += 1;
                }
            }
        }
    }
    report.record(
        "2",
        "census matches brute-force oracle",
        checked >= 500 && mismatches == 0 && errors == 0,
        format!("{checked} ideals, {mismatches} mismatches, {errors} errors"),
        start.elapsed(),
    );
}

fn invariants(report: &mut Report, experiment_records: &[&[TrialRecord]]) {
    let start = Instant::now();
    let mut trials = 0;
    let mut violations = 0;
    for records in experiment_records {
        trials += records.len();
        violations += record_violations(records);
    }
    // Extra sweep checking the restriction identity directly.
    let mut seed = 1000;
    for n in [2usize, 3] {
        for d in [20u64, 40] {
            for p in [0.01, 0.05] {
                let params = ModelParams::new(n, d, p, seed).unwrap();
                seed += 1;
                for trial in 0..400 {
                    let (ideal, _) = sample_ideal(&params, trial).unwrap();
                    let census = enumerate_standard_pairs(&ideal).unwrap();
                    let by_restrictions =
                        degree_by_restrictions(&ideal, census.dim, u64::MAX).unwrap();
                    let ok = census.check_invariants().is_ok()
                        && by_restrictions == BigUint::from(census.deg);
                    violations += !ok as usize;
                    trials += 1;
                }
            }
        }
    }
    report.record(
        "3",
        "structural invariants on sampled trials",
        trials >= 10_000 && violations == 0,
        format!("{trials} trials, {violations} violations"),
        start.elapsed(),
    );
}

fn z_kernel(report: &mut Report) {
    let start = Instant::now();
    let mut mismatches = 0;
    for n in 1..=4 {
        for d in 1..=500u64 {
            let exact = z_count(n, d as f64).unwrap();
            let brute = z_count_bruteforce(n, d as f64, BRUTE_FORCE_GUARD).unwrap();
            mismatches += (exact != brute) as usize;
        }
    }
    let exhaustive = start.elapsed();
    let timer = Instant::now();
    let z = z_count(2, 1e6).unwrap().to_f64().unwrap();
    let big = timer.elapsed();
    let ratio = z / (1e6 * 1e6f64.ln());
    let passed = mismatches == 0 && (0.95..=1.05).contains(&ratio) && big < Duration::from_secs(1);
    report.record(
        "4",
        "divisor-count kernel",
        passed,
        format!(
            "{mismatches} mismatches for n <= 4, d <= 500 ({:.2}s); Z(2,1e6) = {z}, ratio {ratio:.4}, {:.3}s",
            exhaustive.as_secs_f64(),
            big.as_secs_f64()
        ),
        start.elapsed(),
    );
}

fn dimension(report: &mut Report) -> ExperimentOutcome {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentName::Dimension);
    cfg.n = 3;
    cfg.t = Some(2.0);
    cfg.c = Some(2.0);
    cfg.d_grid = vec![50, 100, 200];
    cfg.trials = 2000;
    cfg.seed = 0;
    let out = run_experiment(&cfg).unwrap();
    let predicted = predicted_dimension_limit(3, 2, 2.0);
    let gaps: Vec<f64> = out.summaries.iter().map(|r| (r.dim_mean - predicted).abs()).collect();
    let mean = out.summaries.last().unwrap().dim_mean;
    let elapsed = start.elapsed();
    let passed = (mean - predicted).abs() <= 0.1
        && gaps.windows(2).all(|w| w[1] <= w[0])
        && elapsed < Duration::from_secs(300);
    report.record(
        "5",
        "expected dimension",
        passed,
        format!("mean {mean:.4} vs {predicted:.5}, gaps {gaps:.4?}"),
        elapsed,
    );
    out
}

fn band(report: &mut Report) -> ExperimentOutcome {
    let start = Instant::now();
    let out = run_experiment(&band_config(ExperimentName::Band)).unwrap();
    let series = fraction(&out, "band_and_tail");
    let passed = series.last().is_some_and(|&f| f >= 0.9) && non_decreasing(&series);
    report.record(
        "6",
        "staircase band",
        passed,
        format!("band_and_tail over D = 1e2,1e3,1e4: {series:?}"),
        start.elapsed(),
    );
    out
}

fn regions(report: &mut Report) -> (ExperimentOutcome, ExperimentOutcome) {
    let start = Instant::now();
    let mut cfg = band_config(ExperimentName::SpRegion);
    cfg.free_sets = Some(vec![vec![]]);
    let region = run_experiment(&cfg).unwrap();
    let region_series = fraction(&region, "region[]");

    let mut cfg = band_config(ExperimentName::SpCount);
    cfg.free_sets = Some(vec![vec![0], vec![1]]);
    let count = run_experiment(&cfg).unwrap();
    let zero: Vec<f64> = ["zero[0]", "zero[1]"]
        .iter()
        .map(|k| *fraction(&count, k).last().unwrap())
        .collect();

    let passed = region_series.last().is_some_and(|&f| f >= 0.9) && zero.iter().all(|&f| f >= 0.9);
    report.record(
        "7",
        "standard-pair region and vanishing counts",
        passed,
        format!("region S={{}} over D grid: {region_series:?}; zero fraction |S|=1 at 1e4: {zero:?}"),
        start.elapsed(),
    );
    (region, count)
}

fn degree(report: &mut Report) -> ExperimentOutcome {
    let start = Instant::now();
    let mut cfg = ExperimentConfig::new(ExperimentName::Degree);
    cfg.n = 3;
    cfg.k = Some(1.5);
    cfg.epsilon = Some(0.3);
    cfg.d_grid = vec![100, 200, 300];
    cfg.trials = 200;
    cfg.seed = 0;
    let out = run_experiment(&cfg).unwrap();
    let series = fraction(&out, "deg_z_bounds");
    let retained: Vec<f64> = out.summaries.iter().map(|r| r.values["dim_eq_s"]).collect();
    let passed = series.last().is_some_and(|&f| f >= 0.9);
    report.record(
        "8",
        "degree bounds",
        passed,
        format!("fractions {series:?}, trials with dim = 1: {retained:?}"),
        start.elapsed(),
    );
    out
}

fn global_index(m: &Monomial) -> usize {
    let d = m.total_degree().unwrap();
    count_monomials_up_to(m.n(), d - 1).to_usize().unwrap() + rank_monomial(m).to_usize().unwrap()
}

fn sampler(report: &mut Report) {
    let start = Instant::now();
    let params = ModelParams::new(2, 3, 0.5, 2024).unwrap();
    let trials = 100_000u64;
    let mut counts = vec![0u64; 512];
    for trial in 0..trials {
        let mask = sample_raw(&params, trial)
            .unwrap()
            .iter()
            .fold(0usize, |acc, m| acc | 1 << global_index(m));
        counts[mask] += 1;
    }
    let expected = trials as f64 / 512.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let p_value = 1.0 - ChiSquared::new(511.0).unwrap().cdf(chi2);

    let params = ModelParams::new(2, 10, 0.1, 5).unwrap();
    let alphas: Vec<Monomial> = [[1, 0], [1, 1], [2, 1], [0, 3], [2, 2]]
        .iter()
        .map(|a| Monomial::from_slice(a))
        .collect();
    let n = 20_000;
    let mut outside = [0u64; 5];
    let mut generator = [0u64; 5];
    for trial in 0..n {
        let (ideal, _) = sample_ideal(&params, trial).unwrap();
        for (i, a) in alphas.iter().enumerate() {
            outside[i] += !ideal.contains(a).unwrap() as u64;
            generator[i] += ideal.generators().contains(a) as u64;
        }
    }
    let mut worst: f64 = 0.0;
    for (i, a) in alphas.iter().enumerate() {
        for (observed, p) in [
            (outside[i], prob_not_in_ideal(&params, a).unwrap()),
            (generator[i], prob_minimal_generator(&params, a).unwrap()),
        ] {
            let sigma = (p * (1.0 - p) / n as f64).sqrt();
            worst = worst.max((observed as f64 / n as f64 - p).abs() / sigma);
        }
    }
    report.record(
        "9",
        "sampler calibration",
        p_value > 1e-3 && worst <= 3.0,
        format!("chi2 = {chi2:.1}, p = {p_value:.4}; largest deviation {worst:.2} sigma"),
        start.elapsed(),
    );
}

fn serialize(cfg: &ExperimentConfig) -> (Vec<u8>, Vec<u8>) {
    let out = run_experiment(cfg).unwrap();
    let (mut jsonl, mut csv) = (Vec::new(), Vec::new());
    write_jsonl(&mut jsonl, cfg, &out).unwrap();
    write_csv(&mut csv, cfg, &out).unwrap();
    (jsonl, csv)
}

fn determinism(report: &mut Report) {
    let start = Instant::now();
    let mut differing = Vec::new();
    for name in [
        ExperimentName::Dimension,
        ExperimentName::Band,
        ExperimentName::Degree,
        ExperimentName::SpRegion,
        ExperimentName::SpCount,
        ExperimentName::Table1,
    ] {
        let mut cfg = band_config(name);
        cfg.trials = 50;
        cfg.seed = 11;
        cfg.d_grid = vec![100, 1_000];
        match name {
            ExperimentName::Dimension => {
                cfg.n = 3;
                cfg.k = None;
                cfg.epsilon = None;
                cfg.t = Some(2.0);
                cfg.c = Some(2.0);
                cfg.d_grid = vec![50, 100];
            }
            ExperimentName::Degree => {
                cfg.n = 3;
                cfg.k = Some(1.5);
                cfg.epsilon = Some(0.3);
                cfg.d_grid = vec![50, 100];
            }
            ExperimentName::Table1 => cfg.mode = Table1Mode::Sample,
            _ => {}
        }
        if name == ExperimentName::Table1 {
            cfg.n = 3;
            cfg.k = None;
            cfg.epsilon = None;
            cfg.d_grid = vec![65];
            cfg.p = Some(1.0 / 4225.0);
        }
        let runs: Vec<_> = [1, 8]
            .into_iter()
            .map(|threads| {
                let mut c = cfg.clone();
                c.threads = Some(threads);
                serialize(&c)
            })
            .collect();
        if runs.iter().any(|r| *r != runs[0]) {
            differing.push(name.to_string());
        }
    }
    let mut svg_stable = true;
    for (n, seed) in [(2usize, 5u64), (3, 6)] {
        let params = ModelParams::from_spec(n, 100, PSpec::Exponent { k: 0.5 * n as f64 - 0.5 }, seed).unwrap();
        let spec = RenderSpec {
            levels: vec![3.98, 25.12],
            ..RenderSpec::default()
        };
        let a = render(&sample_ideal(&params, 0).unwrap().0, &spec).unwrap();
        let b = render(&sample_ideal(&params, 0).unwrap().0, &spec).unwrap();
        svg_stable &= a == b;
    }
    report.record(
        "10",
        "determinism across thread counts and reruns",
        differing.is_empty() && svg_stable,
        format!("experiments differing: {differing:?}; svg identical: {svg_stable}"),
        start.elapsed(),
    );
}

fn main() {
    let mut report = Report { failures: 0 };
    table1(&mut report);
    oracle(&mut report);
    z_kernel(&mut report);
    let dim = dimension(&mut report);
    let band_out = band(&mut report);
    let (region, count) = regions(&mut report);
    let deg = degree(&mut report);
    invariants(
        &mut report,
        &[&dim.records, &band_out.records, &region.records, &count.records, &deg.records],
    );
    sampler(&mut report);
    determinism(&mut report);
    println!("acceptance: {} of 10 criteria failed", report.failures);
    let strict = std::env::var("RMI_ACCEPTANCE_STRICT").is_ok_and(|v| v == "1");
    if strict && report.failures > 0 {
        std::process::exit(1);
    }
}
