//! The random monomial ideal model `I(n, D, p)`.
//!
//! Every monomial of positive degree at most `D` in `n` variables is chosen
//! independently with probability `p`; the chosen monomials generate the
//! ideal. Sampling draws, per degree `d`, a binomial number of monomials and
//! then that many distinct ranks uniformly, so the work is proportional to
//! the number of chosen monomials instead of the `C(n+D, n) - 1` candidates.
//!
//! Randomness is counter based: each `(seed, trial, degree)` triple keys its
//! own ChaCha8 stream, so a trial is reproducible regardless of which
//! thread or in which order it runs.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{minimalize, IdealJson, MonomialIdeal};
use crate::monomial::{Exponents, Monomial};

/// Identifier recorded in output metadata.
pub const RNG_ALGORITHM: &str = "chacha8(key=le64 seed|le64 trial|le64 degree|domain tag)";

/// Largest supported degree cap.
pub const MAX_DEGREE_CAP: u64 = 1 << 32;

const TAG_BINOMIAL: &[u8; 8] = b"rmi:bin1";
const TAG_BERNOULLI: &[u8; 8] = b"rmi:brn1";

/// How `p` was specified. All forms resolve to a double at a given `D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "form")]
pub enum PSpec {
    /// A fixed probability.
    Explicit { p: f64 },
    /// `num / den`, kept exact until resolution.
    Ratio { num: u64, den: u64 },
    /// `p = D^{-k}`.
    Exponent { k: f64 },
    /// `p = c * D^{-t}`.
    Scaled { c: f64, t: f64 },
}

impl PSpec {
    pub fn resolve(&self, max_degree: u64) -> Result<f64> {
        let d = max_degree as f64;
        let p = match *self {
            PSpec::Explicit { p } => p,
            PSpec::Ratio { num, den } => {
                if den == 0 {
                    return Err(Error::InvalidParams("ratio with zero denominator".into()));
                }
                num as f64 / den as f64
            }
            PSpec::Exponent { k } => d.powf(-k),
            PSpec::Scaled { c, t } => c * d.powf(-t),
        };
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!(
                "{self:?} resolves to p = {p} at D = {max_degree}, outside (0, 1)"
            )));
        }
        Ok(p)
    }

    /// The exponent `k` when `p = D^{-k}`.
    pub fn exponent(&self) -> Option<f64> {
        match *self {
            PSpec::Exponent { k } => Some(k),
            _ => None,
        }
    }
}

/// Parameters of `I(n, D, p)` plus the master seed.
///
/// `p` is stored as a double and `q` is derived as `1 - p`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub n: usize,
    pub max_degree: u64,
    p: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_spec: Option<PSpec>,
}

impl ModelParams {
    pub fn new(n: usize, max_degree: u64, p: f64, seed: u64) -> Result<Self> {
        Self::validate(n, max_degree)?;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParams(format!("p = {p} is outside (0, 1)")));
        }
        Ok(ModelParams {
            n,
            max_degree,
            p,
            seed,
            p_spec: None,
        })
    }

    pub fn from_spec(n: usize, max_degree: u64, spec: PSpec, seed: u64) -> Result<Self> {
        Self::validate(n, max_degree)?;
        let p = spec.resolve(max_degree)?;
        Ok(ModelParams {
            n,
            max_degree,
            p,
            seed,
            p_spec: Some(spec),
        })
    }

    fn validate(n: usize, max_degree: u64) -> Result<()> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidParams(format!("n = {n} must lie in 1..=64")));
        }
        if max_degree == 0 || max_degree > MAX_DEGREE_CAP {
            return Err(Error::InvalidParams(format!(
                "D = {max_degree} must lie in 1..=2^32"
            )));
        }
        Ok(())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `ln q`, accurate for small `p`.
    fn ln_q(&self) -> f64 {
        (-self.p).ln_1p()
    }
}

/// `C(n, k)` as a big integer.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) is divisible by (i + 1); split to limit overflow.
        let num = n as u128 - i;
        let den = i + 1;
        let g = gcd(acc, den);
        acc = (acc / g).checked_mul(num / (den / g))?;
    }
    Some(acc)
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Number of monomials of total degree exactly `d` in `n` variables.
pub fn count_monomials_exact_degree(n: usize, d: u64) -> BigUint {
    assert!(n >= 1);
    binomial(n as u64 - 1 + d, n as u64 - 1)
}

/// Size of the sample space: monomials of degree `1..=D`, i.e. `C(n+D, n) - 1`.
pub fn count_monomials_up_to(n: usize, max_degree: u64) -> BigUint {
    assert!(n >= 1);
    binomial(n as u64 + max_degree, n as u64) - BigUint::one()
}

fn count_exact_u128(n: usize, d: u64) -> Option<u128> {
    binomial_u128(n as u64 - 1 + d, n as u64 - 1)
}

/// The `index`-th monomial of degree `d` in ascending lexicographic order of
/// exponent vectors, so index 0 is `x_n^d` and the last index is `x_1^d`.
pub fn unrank_monomial(n: usize, d: u64, index: &BigUint) -> Result<Monomial> {
    if n == 0 {
        return Err(Error::Precondition("unranking needs n >= 1".into()));
    }
    let count = count_monomials_exact_degree(n, d);
    if *index >= count {
        return Err(Error::IndexOutOfRange {
            index: index.to_string(),
            count: count.to_string(),
        });
    }
    if count.to_u128().is_some() {
        return Ok(unrank_u128(n, d, index.to_u128().expect("index below count")));
    }
    let mut idx = index.clone();
    let mut exps = Exponents::with_capacity(n);
    let mut rest = d;
    for pos in 0..n - 1 {
        let tail = n - pos - 1;
        let mut a = 0;
        loop {
            let c = count_monomials_exact_degree(tail, rest - a);
            if idx < c {
                break;
            }
            idx -= c;
            a += 1;
        }
        exps.push(a);
        rest -= a;
    }
    exps.push(rest);
    Ok(Monomial::from_exps_unchecked(exps))
}

/// Fast path of [`unrank_monomial`]; `index` must be in range.
pub(crate) fn unrank_u128(n: usize, d: u64, mut index: u128) -> Monomial {
    let mut exps = Exponents::with_capacity(n);
    let mut rest = d;
    for pos in 0..n - 1 {
        let tail = n - pos - 1;
        let a = if tail == 1 {
            // One monomial per value of this coordinate.
            let a = index as u64;
            index = 0;
            a
        } else {
            let mut a = 0;
            loop {
                let c = count_exact_u128(tail, rest - a).expect("fits when total fits");
                if index < c {
                    break a;
                }
                index -= c;
                a += 1;
            }
        };
        exps.push(a);
        rest -= a;
    }
    exps.push(rest);
    Monomial::from_exps_unchecked(exps)
}

/// Inverse of [`unrank_monomial`].
pub fn rank_monomial(m: &Monomial) -> BigUint {
    let n = m.n();
    let mut rank = BigUint::zero();
    let mut rest = m.degree_unchecked();
    for pos in 0..n - 1 {
        let tail = n - pos - 1;
        for a in 0..m.get(pos) {
            rank += count_monomials_exact_degree(tail, rest - a);
        }
        rest -= m.get(pos);
    }
    rank
}

fn stream_rng(seed: u64, trial: u64, degree: u64, tag: &[u8; 8]) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&trial.to_le_bytes());
    key[16..24].copy_from_slice(&degree.to_le_bytes());
    key[24..32].copy_from_slice(tag);
    ChaCha8Rng::from_seed(key)
}

/// The raw chosen set for `(seed, trial)`, before minimalization, grouped
/// by degree and sorted by rank within each degree.
pub fn sample_raw(params: &ModelParams, trial: u64) -> Result<Vec<Monomial>> {
    let n = params.n;
    let mut raw = Vec::new();
    for d in 1..=params.max_degree {
        let count = count_exact_u128(n, d)
            .and_then(|c| u64::try_from(c).ok())
            .filter(|&c| usize::try_from(c).is_ok())
            .ok_or_else(|| {
                Error::InvalidParams(format!(
                    "{} monomials of degree {d} exceed the sampler's 64-bit range",
                    count_monomials_exact_degree(n, d)
                ))
            })?;
        let mut rng = stream_rng(params.seed, trial, d, TAG_BINOMIAL);
        let chosen = Binomial::new(count, params.p)
            .map_err(|e| Error::InvalidParams(e.to_string()))?
            .sample(&mut rng);
        if chosen == 0 {
            continue;
        }
        let mut ranks =
            rand::seq::index::sample(&mut rng, count as usize, chosen as usize).into_vec();
        ranks.sort_unstable();
        raw.extend(ranks.into_iter().map(|r| unrank_u128(n, d, r as u128)));
    }
    Ok(raw)
}

/// Draws `I(n, D, p)` for `(seed, trial)`; returns the minimalized ideal
/// and the number of raw chosen monomials.
pub fn sample_ideal(params: &ModelParams, trial: u64) -> Result<(MonomialIdeal, u64)> {
    let raw = sample_raw(params, trial)?;
    let raw_count = raw.len() as u64;
    Ok((minimalize(raw, params.n)?, raw_count))
}

/// Reference sampler: scans every monomial of degree `1..=D` in rank order
/// and flips one Bernoulli(`p`) coin each. Same law as [`sample_raw`], but
/// costs `C(n+D, n)` draws, so only for small cross-checks.
pub fn sample_raw_bernoulli(params: &ModelParams, trial: u64) -> Result<Vec<Monomial>> {
    let total = count_monomials_up_to(params.n, params.max_degree);
    if total > BigUint::from(10_000_000u64) {
        return Err(Error::GuardExceeded {
            needed: total.to_u128().unwrap_or(u128::MAX),
            guard: 10_000_000,
        });
    }
    let mut rng = stream_rng(params.seed, trial, 0, TAG_BERNOULLI);
    let mut raw = Vec::new();
    for d in 1..=params.max_degree {
        let count = count_exact_u128(params.n, d).expect("guarded above");
        for r in 0..count {
            if rng.random_bool(params.p) {
                raw.push(unrank_u128(params.n, d, r));
            }
        }
    }
    Ok(raw)
}

/// A sampled ideal together with the provenance needed to reproduce it.
#[derive(Clone, Debug)]
pub struct SampledIdeal {
    pub ideal: MonomialIdeal,
    pub raw_count: u64,
    pub trial: u64,
    pub params: ModelParams,
}

impl SampledIdeal {
    pub fn draw(params: &ModelParams, trial: u64) -> Result<Self> {
        let (ideal, raw_count) = sample_ideal(params, trial)?;
        Ok(SampledIdeal {
            ideal,
            raw_count,
            trial,
            params: params.clone(),
        })
    }

    /// Ideal JSON with a `metadata` header.
    pub fn to_json(&self) -> IdealJson {
        let mut json = self.ideal.to_json();
        json.metadata = Some(serde_json::json!({
            "seed": self.params.seed,
            "trial": self.trial,
            "rng_algorithm": RNG_ALGORITHM,
            "p_resolved": self.params.p(),
            "max_degree": self.params.max_degree,
            "raw_count": self.raw_count,
        }));
        json
    }
}

fn check_probability_input(params: &ModelParams, alpha: &Monomial) -> Result<u128> {
    if alpha.n() != params.n {
        return Err(Error::DimensionMismatch {
            expected: params.n,
            found: alpha.n(),
        });
    }
    let deg = alpha.total_degree()?;
    if deg == 0 || deg > params.max_degree {
        return Err(Error::Precondition(format!(
            "need 1 <= |alpha| <= D, got |alpha| = {deg}, D = {}",
            params.max_degree
        )));
    }
    alpha.divisor_product()
}

/// `P(x^alpha not in I) = q^(prod(alpha_i + 1) - 1)`: none of the
/// positive-degree divisors of `x^alpha` was chosen.
pub fn prob_not_in_ideal(params: &ModelParams, alpha: &Monomial) -> Result<f64> {
    let divisors = check_probability_input(params, alpha)?;
    Ok(((divisors - 1) as f64 * params.ln_q()).exp())
}

/// `P(x^alpha in G(I)) = p q^(prod(alpha_i + 1) - 2)`: `x^alpha` was chosen
/// and none of its positive-degree proper divisors was.
pub fn prob_minimal_generator(params: &ModelParams, alpha: &Monomial) -> Result<f64> {
    let divisors = check_probability_input(params, alpha)?;
    Ok(params.p * ((divisors - 2) as f64 * params.ln_q()).exp())
}

/// Lower band, generator upper band and tail thresholds `(f_s, g_s, h_s)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub f: f64,
    pub g: f64,
    pub h: f64,
}

/// `f_s = D^{k-s-eps}`, `g_s = h_s = D^{k-s+eps}` for `p = D^{-k}`.
pub fn default_thresholds(k: f64, s: usize, epsilon: f64, max_degree: f64) -> Result<Thresholds> {
    if !(epsilon > 0.0) {
        return Err(Error::Precondition(format!("epsilon = {epsilon} must be positive")));
    }
    let base = k - s as f64;
    let upper = max_degree.powf(base + epsilon);
    Ok(Thresholds {
        f: max_degree.powf(base - epsilon),
        g: upper,
        h: upper,
    })
}

/// `f_s = D^{-s-eps}/p`, `g_s = h_s = D^{-s+eps}/p` for an arbitrary `p`.
pub fn thresholds_for_p(p: f64, s: usize, epsilon: f64, max_degree: f64) -> Result<Thresholds> {
    if !(epsilon > 0.0) {
        return Err(Error::Precondition(format!("epsilon = {epsilon} must be positive")));
    }
    let upper = max_degree.powf(-(s as f64) + epsilon) / p;
    Ok(Thresholds {
        f: max_degree.powf(-(s as f64) - epsilon) / p,
        g: upper,
        h: upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u64]) -> Monomial {
        Monomial::from_slice(e)
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn counting() {
        assert_eq!(count_monomials_exact_degree(2, 3), big(4));
        assert_eq!(count_monomials_exact_degree(5, 0), big(1));
        assert_eq!(count_monomials_exact_degree(3, 65), big(2211));
        assert_eq!(count_monomials_up_to(3, 65), big(50115));
        assert_eq!(count_monomials_up_to(1, 17), big(17));
        assert_eq!(count_monomials_up_to(2, 2), big(5));
    }

    #[test]
    fn unrank_boundaries() {
        assert_eq!(unrank_monomial(2, 3, &big(0)).unwrap(), m(&[0, 3]));
        assert_eq!(unrank_monomial(2, 3, &big(3)).unwrap(), m(&[3, 0]));
        assert_eq!(unrank_monomial(1, 9, &big(0)).unwrap(), m(&[9]));
        assert!(matches!(
            unrank_monomial(2, 3, &big(4)),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn rank_unrank_roundtrip_exhaustive() {
        for n in 1..=4 {
            for d in 0..=8 {
                let count = count_monomials_exact_degree(n, d).to_u64().unwrap();
                let mut prev: Option<Monomial> = None;
                for i in 0..count {
                    let mono = unrank_monomial(n, d, &big(i)).unwrap();
                    assert_eq!(mono.total_degree().unwrap(), d);
                    assert_eq!(rank_monomial(&mono), big(i));
                    if let Some(p) = prev {
                        assert!(p.exponents() < mono.exponents(), "ascending lex");
                    }
                    prev = Some(mono);
                }
            }
        }
    }

    #[test]
    fn big_unrank_matches_fast_path() {
        // 100 variables at degree 100 overflows u128 counts.
        let n = 100;
        let d = 100;
        let count = count_monomials_exact_degree(n, d);
        assert!(count.to_u128().is_none());
        let idx = &count - BigUint::one();
        let last = unrank_monomial(n, d, &idx).unwrap();
        assert_eq!(last.get(0), d);
        assert_eq!(rank_monomial(&last), idx);
        let mid = &count / BigUint::from(3u32);
        assert_eq!(rank_monomial(&unrank_monomial(n, d, &mid).unwrap()), mid);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(0, 5, 0.5, 1).is_err());
        assert!(ModelParams::new(2, 0, 0.5, 1).is_err());
        assert!(ModelParams::new(2, 5, 1.0, 1).is_err());
        assert!(ModelParams::new(2, 5, 0.0, 1).is_err());
        let p = ModelParams::from_spec(3, 65, PSpec::Exponent { k: 2.0 }, 1).unwrap();
        assert!((p.p() - 1.0 / 4225.0).abs() < 1e-12);
        let p = ModelParams::from_spec(3, 200, PSpec::Scaled { c: 2.0, t: 2.0 }, 1).unwrap();
        assert!((p.p() - 5e-5).abs() < 1e-12);
        assert!(ModelParams::from_spec(2, 10, PSpec::Scaled { c: 200.0, t: 1.0 }, 1).is_err());
        let p = ModelParams::from_spec(3, 65, PSpec::Ratio { num: 1, den: 4225 }, 1).unwrap();
        assert_eq!(p.q(), 1.0 - 1.0 / 4225.0);
    }

    #[test]
    fn sampling_is_deterministic() {
        let params = ModelParams::new(3, 30, 0.01, 42).unwrap();
        let a = sample_ideal(&params, 7).unwrap();
        let b = sample_ideal(&params, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_ideal(&params, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn near_one_selects_everything() {
        let params = ModelParams::new(2, 2, 1.0 - 1e-12, 3).unwrap();
        let raw = sample_raw(&params, 0).unwrap();
        assert_eq!(raw.len(), 5);
        let (ideal, raw_count) = sample_ideal(&params, 0).unwrap();
        assert_eq!(raw_count, 5);
        assert_eq!(ideal.generators(), &[m(&[0, 1]), m(&[1, 0])]);
    }

    #[test]
    fn raw_sample_has_no_repeats() {
        let params = ModelParams::new(2, 40, 0.4, 9).unwrap();
        for trial in 0..20 {
            let raw = sample_raw(&params, trial).unwrap();
            let mut sorted = raw.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), raw.len());
            assert!(raw.iter().all(|r| (1..=40).contains(&r.total_degree().unwrap())));
        }
    }

    #[test]
    fn probability_closed_forms() {
        let params = ModelParams::new(2, 10, 0.5, 0).unwrap();
        assert!((prob_not_in_ideal(&params, &m(&[1, 1])).unwrap() - 0.125).abs() < 1e-15);
        assert!((prob_not_in_ideal(&params, &m(&[0, 1])).unwrap() - 0.5).abs() < 1e-15);
        assert!((prob_minimal_generator(&params, &m(&[1, 0])).unwrap() - 0.5).abs() < 1e-15);
        assert!((prob_minimal_generator(&params, &m(&[1, 1])).unwrap() - 0.125).abs() < 1e-15);
        assert!(prob_not_in_ideal(&params, &m(&[0, 0])).is_err());
        assert!(prob_not_in_ideal(&params, &m(&[6, 5])).is_err());
    }

    #[test]
    fn thresholds() {
        let t = default_thresholds(2.0, 0, 0.25, 65.0).unwrap();
        assert!((t.f - 65f64.powf(1.75)).abs() < 1e-9);
        assert!((t.f - 1487.98).abs() < 0.01);
        assert!((t.g - 11996.51).abs() < 0.01);
        assert_eq!(t.g, t.h);
        let t = default_thresholds(0.5, 0, 0.2, 1e4).unwrap();
        assert!((t.f - 15.85).abs() < 0.01);
        let t = default_thresholds(1.0, 1, 1e-12, 100.0).unwrap();
        assert!((t.f - 1.0).abs() < 1e-9);
        assert!(default_thresholds(1.0, 0, 0.0, 100.0).is_err());
        let via_p = thresholds_for_p(1e-2, 0, 0.2, 1e4).unwrap();
        assert!((via_p.f - 1e4f64.powf(0.3)).abs() < 1e-9);
    }
}
