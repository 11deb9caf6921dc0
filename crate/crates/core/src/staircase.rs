//! Staircase-level invariants: standard-monomial counts, Hilbert function
//! values, hyperbolic band checks and 2-D corner extraction.
//!
//! Everything here works by slicing: fixing the first exponent at `a`
//! leaves the ideal of the slice `{alpha : alpha_1 = a}` in one fewer
//! variable, generated by the generators with `g_1 <= a` with their first
//! coordinate dropped. The slice only changes at the distinct first
//! exponents of the generators.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{minimal_antichain, MonomialIdeal};
use crate::monomial::Monomial;

/// Default lattice-point guard for enumerations.
pub const DEFAULT_GUARD: u64 = 100_000_000;

/// Generators of the slice at first exponent `a`; `None` if the slice is
/// the unit ideal.
fn slice(gens: &[Monomial], a: u64) -> Option<Vec<Monomial>> {
    let mut out = Vec::new();
    for g in gens.iter().filter(|g| g.get(0) <= a) {
        let rest = Monomial::from_exps_unchecked(g.exponents()[1..].into());
        if rest.is_one() {
            return None;
        }
        out.push(rest);
    }
    Some(minimal_antichain(out))
}

/// Sorted distinct first exponents, always starting at 0.
fn breakpoints(gens: &[Monomial]) -> Vec<u64> {
    let mut v: Vec<u64> = gens.iter().map(|g| g.get(0)).collect();
    v.push(0);
    v.sort_unstable();
    v.dedup();
    v
}

struct Budget {
    used: u128,
    guard: u64,
}

impl Budget {
    fn new(guard: u64) -> Self {
        Budget { used: 0, guard }
    }

    fn spend(&mut self, points: u128) -> Result<()> {
        self.used += points;
        if self.used > self.guard as u128 {
            return Err(Error::GuardExceeded {
                needed: self.used,
                guard: self.guard,
            });
        }
        Ok(())
    }
}

/// Number of standard monomials of a zero-dimensional ideal, i.e. its degree.
pub fn count_standard_monomials(ideal: &MonomialIdeal) -> Result<BigUint> {
    count_standard_monomials_guarded(ideal, DEFAULT_GUARD)
}

pub fn count_standard_monomials_guarded(ideal: &MonomialIdeal, guard: u64) -> Result<BigUint> {
    for i in 0..ideal.n() {
        if ideal.pure_power(i).is_none() {
            return Err(Error::NotZeroDimensional(i));
        }
    }
    if ideal.n() == 0 {
        return Ok(BigUint::from(1u32));
    }
    let mut budget = Budget::new(guard);
    count_zero_dim(ideal.generators(), &mut budget).map(BigUint::from)
}

fn count_zero_dim(gens: &[Monomial], budget: &mut Budget) -> Result<u128> {
    let n = gens[0].n();
    if n == 1 {
        budget.spend(1)?;
        return Ok(gens.iter().map(|g| g.get(0)).min().unwrap() as u128);
    }
    if n == 2 {
        // Staircase walk: between consecutive outer corners the column
        // height is the second exponent of the left corner.
        let mut sorted: Vec<&Monomial> = gens.iter().collect();
        sorted.sort_unstable_by_key(|g| g.get(0));
        budget.spend(sorted.len() as u128)?;
        let mut total: u128 = 0;
        for w in sorted.windows(2) {
            let width = (w[1].get(0) - w[0].get(0)) as u128;
            total = width
                .checked_mul(w[0].get(1) as u128)
                .and_then(|c| c.checked_add(total))
                .ok_or(Error::Overflow("standard monomial count"))?;
        }
        return Ok(total);
    }
    let cuts = breakpoints(gens);
    let mut total: u128 = 0;
    for (j, &a) in cuts.iter().enumerate() {
        let Some(sub) = slice(gens, a) else { break };
        let width = cuts[j + 1] - a;
        let inner = count_zero_dim(&sub, budget)?;
        total = (width as u128)
            .checked_mul(inner)
            .and_then(|c| c.checked_add(total))
            .ok_or(Error::Overflow("standard monomial count"))?;
    }
    Ok(total)
}

/// Number of standard monomials of total degree exactly `t`; any dimension.
pub fn hilbert_function(ideal: &MonomialIdeal, t: u64) -> Result<BigUint> {
    hilbert_function_guarded(ideal, t, DEFAULT_GUARD)
}

pub fn hilbert_function_guarded(ideal: &MonomialIdeal, t: u64, guard: u64) -> Result<BigUint> {
    if ideal.n() == 0 {
        return Ok(BigUint::from((t == 0) as u32));
    }
    let mut budget = Budget::new(guard);
    hf_rec(ideal.generators(), ideal.n(), t, &mut budget).map(BigUint::from)
}

fn hf_rec(gens: &[Monomial], n: usize, t: u64, budget: &mut Budget) -> Result<u128> {
    if n == 1 {
        budget.spend(1)?;
        let bound = gens.iter().map(|g| g.get(0)).min().unwrap_or(u64::MAX);
        return Ok((t < bound) as u128);
    }
    let cuts = breakpoints(gens);
    let mut total: u128 = 0;
    for (j, &start) in cuts.iter().enumerate() {
        if start > t {
            break;
        }
        let Some(sub) = slice(gens, start) else { break };
        let end = cuts.get(j + 1).map_or(t, |&next| (next - 1).min(t));
        for a in start..=end {
            total = total
                .checked_add(hf_rec(&sub, n - 1, t - a, budget)?)
                .ok_or(Error::Overflow("Hilbert function"))?;
        }
    }
    Ok(total)
}

/// Band `f < prod(alpha_i + 1) < g` on generators, tail threshold `h`,
/// degree cap `D`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BandSpec {
    pub lower: f64,
    pub upper: f64,
    pub tail: f64,
    pub max_degree: u64,
}

impl BandSpec {
    pub fn new(lower: f64, upper: f64, tail: f64, max_degree: u64) -> Result<Self> {
        if !(lower >= 0.0) || (upper.is_finite() && lower > upper) {
            return Err(Error::Precondition(format!(
                "band needs 0 <= f <= g, got f = {lower}, g = {upper}"
            )));
        }
        Ok(BandSpec {
            lower,
            upper,
            tail,
            max_degree,
        })
    }

    pub fn contains_product(&self, product: u128) -> bool {
        let p = product as f64;
        self.lower < p && p < self.upper
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BandOutcome {
    pub passed: bool,
    /// A minimal generator outside the band, when the check fails.
    pub witness: Option<Monomial>,
}

/// Checks `f < prod(alpha_i + 1) < g` for every minimal generator.
pub fn band_check(ideal: &MonomialIdeal, band: &BandSpec) -> Result<BandOutcome> {
    for g in ideal.generators() {
        if !band.contains_product(g.divisor_product()?) {
            return Ok(BandOutcome {
                passed: false,
                witness: Some(g.clone()),
            });
        }
    }
    Ok(BandOutcome {
        passed: true,
        witness: None,
    })
}

/// Largest `prod(alpha_i + 1)` over standard monomials with `|alpha| <= D`.
///
/// Every monomial of degree at most `D` with a larger product lies in the
/// ideal, so `result <= h` is the tail condition.
pub fn max_staircase_product(ideal: &MonomialIdeal, max_degree: u64) -> Result<BigUint> {
    max_staircase_product_guarded(ideal, max_degree, DEFAULT_GUARD)
}

pub fn max_staircase_product_guarded(
    ideal: &MonomialIdeal,
    max_degree: u64,
    guard: u64,
) -> Result<BigUint> {
    let n = ideal.n();
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    if n > 3 {
        // (D+1)^(n-1) one-dimensional slices are visited.
        let needed = (max_degree as u128 + 1).saturating_pow(n as u32 - 1);
        if needed > guard as u128 {
            return Err(Error::GuardExceeded { needed, guard });
        }
    }
    let mut budget = Budget::new(guard);
    let best = max_product_rec(ideal.generators(), n, max_degree, &mut budget)?;
    Ok(BigUint::from(best.unwrap_or(0)))
}

fn max_product_rec(
    gens: &[Monomial],
    n: usize,
    cap: u64,
    budget: &mut Budget,
) -> Result<Option<u128>> {
    if n == 1 {
        budget.spend(1)?;
        let bound = gens.iter().map(|g| g.get(0)).min();
        return Ok(match bound {
            Some(0) => None,
            Some(b) => Some((b - 1).min(cap) as u128 + 1),
            None => Some(cap as u128 + 1),
        });
    }
    let cuts = breakpoints(gens);
    let mut best: Option<u128> = None;
    for (j, &start) in cuts.iter().enumerate() {
        if start > cap {
            break;
        }
        let Some(sub) = slice(gens, start) else { break };
        let end = cuts.get(j + 1).map_or(cap, |&next| (next - 1).min(cap));
        for a in start..=end {
            if let Some(v) = max_product_rec(&sub, n - 1, cap - a, budget)? {
                let p = (a as u128 + 1)
                    .checked_mul(v)
                    .ok_or(Error::Overflow("staircase product"))?;
                best = Some(best.map_or(p, |b| b.max(p)));
            }
        }
    }
    Ok(best)
}

/// `max_staircase_product(I, D) <= h`.
pub fn tail_check(ideal: &MonomialIdeal, h: f64, max_degree: u64, guard: u64) -> Result<bool> {
    let m = max_staircase_product_guarded(ideal, max_degree, guard)?;
    Ok(num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::INFINITY) <= h)
}

/// Outer corners (the minimal generators, by ascending first exponent) and
/// inner corners (lcm of consecutive outer corners) of a 2-D staircase.
pub fn staircase_corners(ideal: &MonomialIdeal) -> Result<(Vec<Monomial>, Vec<Monomial>)> {
    if ideal.n() != 2 {
        return Err(Error::WrongArity {
            expected: 2,
            found: ideal.n(),
        });
    }
    let mut outer = ideal.generators().to_vec();
    outer.sort_unstable_by_key(|g| g.get(0));
    let inner = outer
        .windows(2)
        .map(|w| Monomial::from_slice(&[w[1].get(0), w[0].get(1)]))
        .collect();
    Ok((outer, inner))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens).unwrap()
    }

    fn m(e: &[u64]) -> Monomial {
        Monomial::from_slice(e)
    }

    fn u(v: BigUint) -> u64 {
        v.to_u64().unwrap()
    }

    #[test]
    fn standard_monomial_counts() {
        assert_eq!(u(count_standard_monomials(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap()), 6);
        assert_eq!(
            u(count_standard_monomials(&ideal(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])).unwrap()),
            1
        );
        assert_eq!(
            u(count_standard_monomials(&ideal(2, &[&[2, 0], &[1, 1], &[0, 3]])).unwrap()),
            4
        );
        assert_eq!(
            u(count_standard_monomials(&ideal(3, &[&[2, 0, 0], &[0, 3, 0], &[0, 0, 4]])).unwrap()),
            24
        );
    }

    #[test]
    fn standard_count_rejects_positive_dimension() {
        let err = count_standard_monomials(&ideal(2, &[&[1, 1]])).unwrap_err();
        assert!(matches!(err, Error::NotZeroDimensional(0)));
    }

    #[test]
    fn hilbert_function_examples() {
        assert_eq!(u(hilbert_function(&MonomialIdeal::zero(2), 3).unwrap()), 4);
        assert_eq!(u(hilbert_function(&ideal(2, &[&[1, 1]]), 5).unwrap()), 2);
        assert_eq!(u(hilbert_function(&ideal(3, &[&[1, 1, 0]]), 2).unwrap()), 5);
        assert_eq!(u(hilbert_function(&ideal(2, &[&[2, 0], &[0, 3]]), 1).unwrap()), 2);
        assert_eq!(u(hilbert_function(&ideal(2, &[&[2, 0], &[0, 3]]), 4).unwrap()), 0);
    }

    #[test]
    fn band_examples() {
        let row1 = ideal(3, &[&[8, 35, 5]]);
        assert_eq!(row1.generators()[0].divisor_product().unwrap(), 1944);
        let band = BandSpec::new(1479.5, 12064.0, 12064.0, 65).unwrap();
        assert!(band_check(&row1, &band).unwrap().passed);
        assert!(band_check(&MonomialIdeal::zero(3), &band).unwrap().passed);
        let wide = BandSpec::new(0.0, f64::INFINITY, f64::INFINITY, 65).unwrap();
        assert!(band_check(&ideal(2, &[&[1, 0], &[0, 1]]), &wide).unwrap().passed);
        let out = band_check(&ideal(2, &[&[1, 0], &[0, 9]]), &BandSpec::new(2.5, 100.0, 100.0, 10).unwrap())
            .unwrap();
        assert!(!out.passed);
        assert_eq!(out.witness, Some(m(&[1, 0])));
        assert!(BandSpec::new(5.0, 1.0, 1.0, 1).is_err());
    }

    #[test]
    fn max_product_examples() {
        assert_eq!(u(max_staircase_product(&ideal(2, &[&[2, 0], &[0, 3]]), 5).unwrap()), 6);
        assert_eq!(u(max_staircase_product(&MonomialIdeal::zero(1), 17).unwrap()), 18);
        assert_eq!(u(max_staircase_product(&ideal(2, &[&[1, 1]]), 10).unwrap()), 11);
        assert!(tail_check(&ideal(2, &[&[1, 1]]), 11.0, 10, DEFAULT_GUARD).unwrap());
        assert!(!tail_check(&ideal(2, &[&[1, 1]]), 10.5, 10, DEFAULT_GUARD).unwrap());
    }

    #[test]
    fn max_product_guard() {
        let err = max_staircase_product_guarded(&MonomialIdeal::zero(5), 1000, 1000).unwrap_err();
        assert!(err.is_guard());
    }

    #[test]
    fn corners() {
        let (outer, inner) = staircase_corners(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(outer, vec![m(&[0, 3]), m(&[2, 0])]);
        assert_eq!(inner, vec![m(&[2, 3])]);
        let (outer, inner) = staircase_corners(&ideal(2, &[&[3, 0], &[1, 1], &[0, 2]])).unwrap();
        assert_eq!(outer, vec![m(&[0, 2]), m(&[1, 1]), m(&[3, 0])]);
        assert_eq!(inner, vec![m(&[1, 2]), m(&[3, 1])]);
        let (_, inner) = staircase_corners(&ideal(2, &[&[2, 2]])).unwrap();
        assert!(inner.is_empty());
        assert!(matches!(
            staircase_corners(&ideal(3, &[&[1, 0, 0]])),
            Err(Error::WrongArity { .. })
        ));
    }
}
