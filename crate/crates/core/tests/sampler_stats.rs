//! Distributional checks of the sampler against closed forms.

use num_traits::ToPrimitive;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use rmi_core::ideal::minimalize;
use rmi_core::sampler::{
    count_monomials_up_to, prob_minimal_generator, prob_not_in_ideal, rank_monomial, sample_ideal,
    sample_raw, sample_raw_bernoulli,
};
use rmi_core::{Monomial, ModelParams, PSpec};

/// Position of `m` among all monomials of degree `1..=D`, degree-major.
fn global_index(m: &Monomial) -> usize {
    let d = m.total_degree().unwrap();
    let below = count_monomials_up_to(m.n(), d - 1).to_usize().unwrap();
    below + rank_monomial(m).to_usize().unwrap()
}

#[test]
fn raw_sets_are_uniform_at_one_half() {
    // 9 monomials of degree 1..=3 in two variables: 512 equally likely sets.
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
    let chi2: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p_value = 1.0 - ChiSquared::new(511.0).unwrap().cdf(chi2);
    assert!(p_value > 1e-3, "chi2 = {chi2}, p = {p_value}");
}

fn ks_statistic(mut a: Vec<f64>, mut b: Vec<f64>) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn binomial_path_matches_bernoulli_scan() {
    let params = ModelParams::new(2, 40, 0.03, 99).unwrap();
    let trials = 3000;
    let mut fast = (Vec::new(), Vec::new());
    let mut scan = (Vec::new(), Vec::new());
    for trial in 0..trials {
        for (raw, sink) in [
            (sample_raw(&params, trial).unwrap(), &mut fast),
            (sample_raw_bernoulli(&params, trial).unwrap(), &mut scan),
        ] {
            let degree_sum: u64 = raw.iter().map(|m| m.total_degree().unwrap()).sum();
            sink.0.push(raw.len() as f64);
            sink.1.push(degree_sum as f64);
        }
    }
    // Two-sample KS critical value at significance 1e-3.
    let critical = 1.949 * ((2.0 * trials as f64) / (trials as f64).powi(2)).sqrt();
    let d_count = ks_statistic(fast.0, scan.0);
    let d_degree = ks_statistic(fast.1, scan.1);
    assert!(d_count < critical, "raw count KS {d_count} >= {critical}");
    assert!(d_degree < critical, "degree sum KS {d_degree} >= {critical}");
}

#[test]
fn raw_count_mean_matches_binomial() {
    let params =
        ModelParams::from_spec(3, 65, PSpec::Ratio { num: 1, den: 4225 }, 11).unwrap();
    let total = count_monomials_up_to(3, 65).to_f64().unwrap();
    assert_eq!(total, 50_115.0);
    let mean = total * params.p();
    assert!((mean - 11.86).abs() < 0.01);
    let trials = 10_000;
    let observed: f64 = (0..trials)
        .map(|t| sample_raw(&params, t).unwrap().len() as f64)
        .sum::<f64>()
        / trials as f64;
    let sigma = (total * params.p() * params.q() / trials as f64).sqrt();
    assert!((observed - mean).abs() < 3.0 * sigma, "mean {observed} vs {mean}");
}

#[test]
fn membership_probabilities_match_closed_forms() {
    let params = ModelParams::new(2, 10, 0.1, 5).unwrap();
    let alphas: Vec<Monomial> = [[1, 0], [1, 1], [2, 1], [0, 3], [2, 2]]
        .iter()
        .map(|a| Monomial::from_slice(a))
        .collect();
    let trials = 20_000;
    let mut outside = vec![0u64; alphas.len()];
    let mut generator = vec![0u64; alphas.len()];
    for trial in 0..trials {
        let (ideal, _) = sample_ideal(&params, trial).unwrap();
        for (i, a) in alphas.iter().enumerate() {
            outside[i] += !ideal.contains(a).unwrap() as u64;
            generator[i] += ideal.generators().contains(a) as u64;
        }
    }
    for (i, a) in alphas.iter().enumerate() {
        for (observed, p) in [
            (outside[i], prob_not_in_ideal(&params, a).unwrap()),
            (generator[i], prob_minimal_generator(&params, a).unwrap()),
        ] {
            let f = observed as f64 / trials as f64;
            let sigma = (p * (1.0 - p) / trials as f64).sqrt();
            assert!((f - p).abs() <= 3.0 * sigma, "{a}: {f} vs {p}");
        }
    }
}

#[test]
fn frozen_sample() {
    // Regression pin for the stream layout: any change to key derivation,
    // count sampling or unranking shows up here.
    let params =
        ModelParams::from_spec(3, 65, PSpec::Ratio { num: 1, den: 4225 }, 42).unwrap();
    let (ideal, raw) = sample_ideal(&params, 0).unwrap();
    assert_eq!(raw, 13);
    let expected: Vec<Monomial> = [
        [5, 6, 2],
        [17, 4, 9],
        [6, 1, 34],
        [6, 34, 1],
        [12, 3, 28],
        [4, 31, 11],
        [28, 0, 22],
        [33, 20, 1],
        [3, 7, 51],
    ]
    .iter()
    .map(|g| Monomial::from_slice(g))
    .collect();
    assert_eq!(ideal.generators(), expected.as_slice());
    let again = minimalize(sample_raw(&params, 0).unwrap(), 3).unwrap();
    assert_eq!(again, ideal);
}
