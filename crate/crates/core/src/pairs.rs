//! Standard pair decomposition of monomial ideals.
//!
//! A pair `(x^alpha, S)` with `supp(alpha)` disjoint from `S` is admissible
//! when every monomial of `x^alpha K[S]` is standard. Substituting `x_i -> 1`
//! off `T = S^c` turns this into a membership test: `(x^alpha, S)` is
//! admissible iff `alpha|_T` is not in `I|_T`. A standard pair is an
//! admissible pair whose region is maximal; it suffices to check that no
//! single-variable extension `(alpha with alpha_i = 0, S + {i})` is
//! admissible, since any larger admissible region contains one of these.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ideal::{krull_dimension, minimal_antichain, restrict, MonomialIdeal, Restriction};
use crate::monomial::{Exponents, Monomial, VariableSet};
use crate::sampler::binomial;
use crate::staircase::{count_standard_monomials_guarded, DEFAULT_GUARD};

/// Default number of explicit pairs kept in a census.
pub const DEFAULT_PAIR_CAP: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardPair {
    /// Exponents in the original `n` coordinates, zero on `free`.
    pub alpha: Monomial,
    pub free: VariableSet,
}

impl StandardPair {
    pub fn new(alpha: Monomial, free: VariableSet) -> Result<Self> {
        if alpha.n() != free.n() {
            return Err(Error::DimensionMismatch {
                expected: free.n(),
                found: alpha.n(),
            });
        }
        if free.iter().any(|i| alpha.get(i) > 0) {
            return Err(Error::Precondition(format!(
                "pair ({alpha}, {free:?}) has alpha supported on its free set"
            )));
        }
        Ok(StandardPair { alpha, free })
    }

    /// Whether `beta` lies in `x^alpha K[free]`.
    pub fn covers(&self, beta: &Monomial) -> bool {
        (0..self.alpha.n()).all(|i| {
            if self.free.contains(i) {
                true
            } else {
                beta.get(i) == self.alpha.get(i)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusOptions {
    /// Maximum box volume enumerated for any one free set.
    pub guard: u64,
    /// Maximum number of explicit pairs stored; counts stay exact.
    pub pair_cap: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            guard: DEFAULT_GUARD,
            pair_cap: DEFAULT_PAIR_CAP,
        }
    }
}

impl CensusOptions {
    /// Counts only, no explicit pairs.
    pub fn counts_only(guard: u64) -> Self {
        CensusOptions { guard, pair_cap: 0 }
    }
}

/// All standard pairs of an ideal, aggregated by the size of the free set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairCensus {
    pub n: usize,
    pub dim: usize,
    /// Number of pairs with `|S| = dim`.
    pub deg: u64,
    /// Total number of pairs.
    pub adeg: u64,
    /// `sp_by_dim[i]` counts pairs with `|S| = i`, for `i = 0..=n`.
    pub sp_by_dim: Vec<u64>,
    /// Counts keyed by the bitmask of the free set.
    pub by_free_set: BTreeMap<u64, u64>,
    pub pairs: Vec<StandardPair>,
    /// Set when `pairs` is incomplete because of the pair cap.
    pub truncated: bool,
}

impl PairCensus {
    fn new(n: usize, dim: usize) -> Self {
        PairCensus {
            n,
            dim,
            deg: 0,
            adeg: 0,
            sp_by_dim: vec![0; n + 1],
            by_free_set: BTreeMap::new(),
            pairs: Vec::new(),
            truncated: false,
        }
    }

    pub fn count_for(&self, free: &VariableSet) -> u64 {
        self.by_free_set.get(&free.bits()).copied().unwrap_or(0)
    }

    fn finish(&mut self) {
        self.adeg = self.sp_by_dim.iter().sum();
        self.deg = self.sp_by_dim[self.dim];
    }

    /// Checks the census bookkeeping invariants.
    pub fn check_invariants(&self) -> Result<()> {
        if self.sp_by_dim.iter().sum::<u64>() != self.adeg {
            return Err(Error::InvariantViolation("sp_by_dim does not sum to adeg".into()));
        }
        if self.deg != self.sp_by_dim[self.dim] {
            return Err(Error::InvariantViolation(format!(
                "deg = {} but sp_by_dim[{}] = {}",
                self.deg, self.dim, self.sp_by_dim[self.dim]
            )));
        }
        if let Some(i) = (self.dim + 1..=self.n).find(|&i| self.sp_by_dim[i] != 0) {
            return Err(Error::InvariantViolation(format!(
                "{} standard pairs of size {i} exceed dim {}",
                self.sp_by_dim[i], self.dim
            )));
        }
        Ok(())
    }

    pub fn to_json(&self) -> CensusJson {
        CensusJson {
            dim: self.dim,
            deg: self.deg,
            adeg: self.adeg,
            sp_by_dim: self.sp_by_dim.clone(),
            pairs: self
                .pairs
                .iter()
                .map(|p| PairJson {
                    alpha: p.alpha.exponents().to_vec(),
                    free: p.free.indices(),
                })
                .collect(),
            truncated: self.truncated,
        }
    }
}

/// Wire form of a census.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusJson {
    pub dim: usize,
    pub deg: u64,
    pub adeg: u64,
    pub sp_by_dim: Vec<u64>,
    pub pairs: Vec<PairJson>,
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairJson {
    pub alpha: Vec<u64>,
    pub free: Vec<usize>,
}

/// `I|_{S^c}` for every `S`, stored in the original coordinates (zero on
/// `S`); `None` marks the unit ideal.
#[derive(Clone, Debug)]
pub struct PairTester {
    n: usize,
    table: Vec<Option<Vec<Monomial>>>,
}

impl PairTester {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let n = ideal.n();
        assert!(n < 24, "standard pair tables hold 2^n restrictions");
        let table = (0..1u64 << n)
            .map(|s| {
                let mut gens = Vec::with_capacity(ideal.num_generators());
                for g in ideal.generators() {
                    let mut e: Exponents = g.exponents().into();
                    for (i, x) in e.iter_mut().enumerate() {
                        if s >> i & 1 == 1 {
                            *x = 0;
                        }
                    }
                    let p = Monomial::from_exps_unchecked(e);
                    if p.is_one() {
                        return None;
                    }
                    gens.push(p);
                }
                Some(minimal_antichain(gens))
            })
            .collect();
        PairTester { n, table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Generators of `I|_{S^c}` in original coordinates; `None` for the unit ideal.
    pub fn restriction(&self, free: &VariableSet) -> Option<&[Monomial]> {
        self.table[free.bits() as usize].as_deref()
    }

    fn check(&self, alpha: &Monomial, free: &VariableSet) -> Result<()> {
        if alpha.n() != self.n || free.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: if alpha.n() != self.n { alpha.n() } else { free.n() },
            });
        }
        Ok(())
    }

    pub fn is_admissible(&self, alpha: &Monomial, free: &VariableSet) -> Result<bool> {
        self.check(alpha, free)?;
        Ok(self.admissible_unchecked(alpha, free))
    }

    fn admissible_unchecked(&self, alpha: &Monomial, free: &VariableSet) -> bool {
        if free.iter().any(|i| alpha.get(i) > 0) {
            return false;
        }
        match self.restriction(free) {
            None => false,
            Some(gens) => !gens.iter().any(|g| g.divides_unchecked(alpha)),
        }
    }

    pub fn is_standard(&self, alpha: &Monomial, free: &VariableSet) -> Result<bool> {
        self.check(alpha, free)?;
        if !self.admissible_unchecked(alpha, free) {
            return Ok(false);
        }
        Ok(free
            .complement()
            .iter()
            .all(|i| !self.admissible_unchecked(&alpha.with_zeroed(i), &free.with(i))))
    }
}

/// `(x^alpha, S)` is admissible: `alpha` vanishes on `S` and `alpha|_{S^c}`
/// is not in `I|_{S^c}`.
pub fn is_admissible(ideal: &MonomialIdeal, alpha: &Monomial, free: &VariableSet) -> Result<bool> {
    if alpha.n() != ideal.n() || free.n() != ideal.n() {
        return Err(Error::DimensionMismatch {
            expected: ideal.n(),
            found: alpha.n().max(free.n()),
        });
    }
    if free.iter().any(|i| alpha.get(i) > 0) {
        return Ok(false);
    }
    let t = free.complement();
    match restrict(ideal, &t)? {
        Restriction::Unit { .. } => Ok(false),
        Restriction::Ideal(r) => {
            if r.indices.is_empty() {
                return Ok(true);
            }
            Ok(!r.ideal.contains_unchecked(&alpha.project(&r.indices)))
        }
    }
}

/// Admissible, and no one-variable extension `(alpha with alpha_i = 0, S + {i})`
/// is admissible.
pub fn is_standard(ideal: &MonomialIdeal, alpha: &Monomial, free: &VariableSet) -> Result<bool> {
    if !is_admissible(ideal, alpha, free)? {
        return Ok(false);
    }
    for i in free.complement().iter() {
        if is_admissible(ideal, &alpha.with_zeroed(i), &free.with(i))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full standard pair census with default options.
pub fn enumerate_standard_pairs(ideal: &MonomialIdeal) -> Result<PairCensus> {
    enumerate_standard_pairs_with(ideal, &CensusOptions::default())
}

/// Full standard pair census.
///
/// For each free set `S`, with `T = S^c` and `J = I|_T`, candidate `alpha`
/// range over the box `prod_{i in T} [0, M_i)` where `M_i` is the largest
/// exponent of `x_i` in `G(J)`; beyond it a pair extends freely in
/// direction `i`. Sets with some `M_i = 0` or a unit restriction carry no
/// pairs. Inside the box the last coordinate of `T` is handled as an
/// interval per prefix of the others, so the cost is the number of
/// standard prefixes rather than the box volume.
pub fn enumerate_standard_pairs_with(
    ideal: &MonomialIdeal,
    opts: &CensusOptions,
) -> Result<PairCensus> {
    let n = ideal.n();
    let tester = PairTester::new(ideal);
    let mut census = PairCensus::new(n, krull_dimension(ideal));
    for free in VariableSet::all_subsets(n) {
        census_for_free_set(&tester, &free, opts, &mut census)?;
    }
    census.finish();
    Ok(census)
}

fn census_for_free_set(
    tester: &PairTester,
    free: &VariableSet,
    opts: &CensusOptions,
    census: &mut PairCensus,
) -> Result<()> {
    let n = tester.n();
    let Some(j_gens) = tester.restriction(free) else {
        return Ok(());
    };
    let t_idx = free.complement().indices();
    if t_idx.is_empty() {
        // Only the zero ideal restricts to a proper ideal on no variables.
        record(census, free, std::iter::once(Monomial::one(n)), 1, opts);
        return Ok(());
    }
    let bounds: Vec<u64> = t_idx
        .iter()
        .map(|&i| j_gens.iter().map(|g| g.get(i)).max().unwrap_or(0))
        .collect();
    if bounds.contains(&0) {
        return Ok(());
    }
    let volume = bounds
        .iter()
        .try_fold(1u128, |acc, &b| acc.checked_mul(b as u128))
        .unwrap_or(u128::MAX);
    if volume > opts.guard as u128 {
        return Err(Error::GuardExceeded {
            needed: volume,
            guard: opts.guard,
        });
    }
    // Extension tables E_i = I|_{T - i}; None is the unit ideal, for which
    // the extension is never admissible.
    let extensions: Vec<Option<&[Monomial]>> = t_idx
        .iter()
        .map(|&i| tester.restriction(&free.with(i)))
        .collect();

    let walker = PrefixWalker {
        t_idx: &t_idx,
        bounds: &bounds,
    };
    let mut alpha: Exponents = smallvec::smallvec![0; n];
    let j_list: Vec<&Monomial> = j_gens.iter().collect();
    let ext_lists: Vec<Option<Vec<&Monomial>>> = extensions
        .iter()
        .map(|e| e.map(|g| g.iter().collect()))
        .collect();
    walker.walk(0, &mut alpha, &j_list, &ext_lists, free, opts, census);
    Ok(())
}

fn record(
    census: &mut PairCensus,
    free: &VariableSet,
    alphas: impl Iterator<Item = Monomial>,
    count: u64,
    opts: &CensusOptions,
) {
    census.sp_by_dim[free.len()] += count;
    *census.by_free_set.entry(free.bits()).or_insert(0) += count;
    for alpha in alphas {
        if census.pairs.len() >= opts.pair_cap {
            census.truncated = true;
            break;
        }
        census.pairs.push(StandardPair { alpha, free: *free });
    }
}

struct PrefixWalker<'a> {
    t_idx: &'a [usize],
    bounds: &'a [u64],
}

impl PrefixWalker<'_> {
    /// Recurses over the prefix coordinates `t_idx[..last]`. The generator
    /// lists hold only generators compatible with the prefix fixed so far
    /// (`g_c <= alpha_c` on every fixed coordinate).
    #[allow(clippy::too_many_arguments)]
    fn walk(
        &self,
        level: usize,
        alpha: &mut Exponents,
        j_list: &[&Monomial],
        ext_lists: &[Option<Vec<&Monomial>>],
        free: &VariableSet,
        opts: &CensusOptions,
        census: &mut PairCensus,
    ) {
        let last_pos = self.t_idx.len() - 1;
        if level == last_pos {
            self.finish_prefix(alpha, j_list, ext_lists, free, opts, census);
            return;
        }
        let coord = self.t_idx[level];
        let later = &self.t_idx[level + 1..];
        for v in 0..self.bounds[level] {
            alpha[coord] = v;
            let j_next: Vec<&Monomial> =
                j_list.iter().copied().filter(|g| g.get(coord) <= v).collect();
            // (prefix, 0, ..., 0) in J: every larger v is in J too.
            if j_next.iter().any(|g| later.iter().all(|&c| g.get(c) == 0)) {
                break;
            }
            let ext_next: Vec<Option<Vec<&Monomial>>> = ext_lists
                .iter()
                .map(|e| {
                    e.as_ref()
                        .map(|l| l.iter().copied().filter(|g| g.get(coord) <= v).collect())
                })
                .collect();
            self.walk(level + 1, alpha, &j_next, &ext_next, free, opts, census);
        }
        alpha[coord] = 0;
    }

    fn finish_prefix(
        &self,
        alpha: &mut Exponents,
        j_list: &[&Monomial],
        ext_lists: &[Option<Vec<&Monomial>>],
        free: &VariableSet,
        opts: &CensusOptions,
        census: &mut PairCensus,
    ) {
        let last_pos = self.t_idx.len() - 1;
        let last = self.t_idx[last_pos];
        // alpha_last < min g_last over compatible generators keeps alpha out of J.
        let member_from = j_list.iter().map(|g| g.get(last)).min().unwrap_or(u64::MAX);
        let hi = member_from.min(self.bounds[last_pos]);
        // Extension in the last direction drops alpha_last entirely, so it
        // is blocked iff some compatible generator of E_last exists.
        let blocked_last = match &ext_lists[last_pos] {
            None => true,
            Some(l) => !l.is_empty(),
        };
        if !blocked_last || hi == 0 {
            return;
        }
        // Extension in prefix direction i is blocked once alpha_last reaches
        // the smallest g_last of a generator of E_i dividing the rest.
        let lo = ext_lists[..last_pos]
            .iter()
            .map(|ext| match ext {
                None => 0,
                Some(l) => l.iter().map(|g| g.get(last)).min().unwrap_or(u64::MAX),
            })
            .max()
            .unwrap_or(0);
        if lo >= hi {
            return;
        }
        let base = alpha.clone();
        let alphas = (lo..hi).map(move |v| {
            let mut e = base.clone();
            e[last] = v;
            Monomial::from_exps_unchecked(e)
        });
        record(census, free, alphas, hi - lo, opts);
    }
}

/// Independent oracle: every admissible pair with `alpha` in `[0, B]^n`,
/// admissibility checked from the definition, then the minimal elements
/// found by explicit comparisons under
/// `(a, S) <= (b, T)  iff  x^a | x^b and supp(b - a) + T subset of S`.
///
/// `B` must be at least the largest generator exponent for the result to be
/// the full census.
pub fn brute_force_standard_pairs(ideal: &MonomialIdeal, box_bound: u64) -> Result<PairCensus> {
    let n = ideal.n();
    let points = (box_bound as u128 + 1).pow(n as u32) << n;
    if n > 4 || box_bound > 20 {
        return Err(Error::GuardExceeded {
            needed: points,
            guard: 21u64.pow(4) << 4,
        });
    }
    // Admissible: no generator divides any alpha + beta with beta on S,
    // i.e. every generator exceeds alpha somewhere off S.
    let admissible = |alpha: &[u64], free: u64| {
        ideal.generators().iter().all(|g| {
            (0..n).any(|i| free >> i & 1 == 0 && g.get(i) > alpha[i])
        })
    };
    let mut candidates: Vec<(Vec<u64>, u64)> = Vec::new();
    for free in 0..1u64 << n {
        let mut alpha = vec![0u64; n];
        loop {
            if admissible(&alpha, free) {
                candidates.push((alpha.clone(), free));
            }
            // Odometer over coordinates outside `free`.
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                if free >> pos & 1 == 1 {
                    pos += 1;
                    continue;
                }
                if alpha[pos] < box_bound {
                    alpha[pos] += 1;
                    break;
                }
                alpha[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
    }
    // q <= p: q's region contains p's.
    let below = |q: &(Vec<u64>, u64), p: &(Vec<u64>, u64)| {
        let (a, s) = q;
        let (b, t) = p;
        let divides = a.iter().zip(b).all(|(x, y)| x <= y);
        let mut diff_support = 0u64;
        for i in 0..n {
            if b[i] > a[i] {
                diff_support |= 1 << i;
            }
        }
        divides && (diff_support | t) & !s == 0
    };
    let mut census = PairCensus::new(n, krull_dimension(ideal));
    for p in &candidates {
        let dominated = candidates
            .iter()
            .filter(|q| q.1 & p.1 == p.1)
            .any(|q| q != p && below(q, p));
        if !dominated {
            let free = VariableSet::from_bits(p.1, n)?;
            let alpha = Monomial::from_exps_unchecked(Exponents::from_slice(&p.0));
            record(
                &mut census,
                &free,
                std::iter::once(alpha),
                1,
                &CensusOptions::default(),
            );
        }
    }
    census.pairs.sort();
    census.finish();
    Ok(census)
}

/// Degree: the number of standard pairs with `|S| = dim`. Cross-checked
/// against `sum over |T| = n - dim` of the standard-monomial counts of
/// `I|_T`; a disagreement is reported as an invariant violation.
pub fn degree(ideal: &MonomialIdeal) -> Result<BigUint> {
    let census = enumerate_standard_pairs_with(ideal, &CensusOptions::counts_only(DEFAULT_GUARD))?;
    let by_restriction = degree_by_restrictions(ideal, census.dim, DEFAULT_GUARD)?;
    if by_restriction != BigUint::from(census.deg) {
        return Err(Error::InvariantViolation(format!(
            "degree {} from pairs but {} from restrictions",
            census.deg, by_restriction
        )));
    }
    Ok(by_restriction)
}

/// `sum_{|T| = n - dim} deg(I|_T)`, unit restrictions contributing 0.
pub fn degree_by_restrictions(ideal: &MonomialIdeal, dim: usize, guard: u64) -> Result<BigUint> {
    let n = ideal.n();
    let mut total = BigUint::from(0u32);
    for t in VariableSet::all_subsets(n).into_iter().filter(|t| t.len() == n - dim) {
        if let Restriction::Ideal(r) = restrict(ideal, &t)? {
            total += count_standard_monomials_guarded(&r.ideal, guard)?;
        }
    }
    Ok(total)
}

/// Arithmetic degree: the total number of standard pairs.
pub fn arithmetic_degree(ideal: &MonomialIdeal) -> Result<BigUint> {
    let census = enumerate_standard_pairs_with(ideal, &CensusOptions::counts_only(DEFAULT_GUARD))?;
    Ok(BigUint::from(census.adeg))
}

/// `sum over pairs of C(t - |alpha| + |S| - 1, |S| - 1)`, where a pair with
/// `|S| = 0` contributes 1 exactly when `t = |alpha|` and a pair with
/// `|S| >= 1` contributes 0 when `t < |alpha|`.
///
/// Pair regions may overlap in positive dimension, so this can exceed the
/// Hilbert function.
pub fn hilbert_sum(census: &PairCensus, t: u64) -> Result<BigUint> {
    if census.truncated {
        return Err(Error::CensusTruncated("hilbert_sum"));
    }
    let mut total = BigUint::from(0u32);
    for pair in &census.pairs {
        let deg = pair.alpha.total_degree()?;
        let s = pair.free.len() as u64;
        if s == 0 {
            if t == deg {
                total += 1u32;
            }
        } else if t >= deg {
            total += binomial(t - deg + s - 1, s - 1);
        }
    }
    Ok(total)
}

/// Smallest `m >= 1` with `m^(t-1) > h`; `None` when no `m` qualifies
/// (only for `t = 1` and `h >= 1`).
fn region_lower(h: f64, t: usize) -> Option<u64> {
    if t == 1 {
        return (h < 1.0).then_some(1);
    }
    if h < 1.0 {
        return Some(1);
    }
    let e = (t - 1) as i32;
    let mut m = (h.powf(1.0 / e as f64).floor() as u64).max(1);
    while (m as f64).powi(e) <= h {
        m += 1;
    }
    while m > 1 && ((m - 1) as f64).powi(e) > h {
        m -= 1;
    }
    Some(m)
}

/// Lattice region `{alpha in Z^t : prod(alpha_i + 1) < f and (alpha_i + 1)^(t-1) > h for all i}`.
pub fn region_l(f: f64, h: f64, t: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let Some(lower) = region_lower(h, t) else {
        return out;
    };
    if t == 0 {
        return out;
    }
    let mut factors = vec![0u64; t];
    region_rec(f, lower, 0, 1, &mut factors, &mut |fs| {
        out.push(fs.iter().map(|m| m - 1).collect())
    });
    out
}

/// `|region_l(f, h, t)|` without materializing the points.
pub fn region_l_size(f: f64, h: f64, t: usize) -> u128 {
    let Some(lower) = region_lower(h, t) else {
        return 0;
    };
    if t == 0 {
        return 0;
    }
    count_rec(f, lower, t, 1)
}

fn fits(product: u128, f: f64) -> bool {
    (product as f64) < f
}

fn region_rec(
    f: f64,
    lower: u64,
    pos: usize,
    product: u128,
    factors: &mut Vec<u64>,
    emit: &mut impl FnMut(&[u64]),
) {
    if pos == factors.len() {
        emit(factors);
        return;
    }
    // Remaining coordinates need at least `lower` each.
    let rest = (lower as u128).pow((factors.len() - pos - 1) as u32);
    let mut m = lower;
    while fits(product * m as u128 * rest, f) {
        factors[pos] = m;
        region_rec(f, lower, pos + 1, product * m as u128, factors, emit);
        m += 1;
    }
}

fn count_rec(f: f64, lower: u64, remaining: usize, product: u128) -> u128 {
    if remaining == 1 {
        // Largest m with product * m < f.
        let mut m = (f / product as f64).ceil().max(1.0) as u128;
        while m > 0 && !fits(product * m, f) {
            m -= 1;
        }
        while fits(product * (m + 1), f) {
            m += 1;
        }
        return m.saturating_sub(lower as u128 - 1);
    }
    let rest = (lower as u128).pow((remaining - 1) as u32);
    let mut total = 0;
    let mut m = lower as u128;
    while fits(product * m * rest, f) {
        total += count_rec(f, lower, remaining - 1, product * m);
        m += 1;
    }
    total
}

/// Embeds a point of `Z^T` into the original coordinates, zero off `T`.
pub fn embed(point: &[u64], t: &VariableSet) -> Monomial {
    let mut e: Exponents = smallvec::smallvec![0; t.n()];
    for (v, i) in point.iter().zip(t.iter()) {
        e[i] = *v;
    }
    Monomial::from_exps_unchecked(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(n: usize, gens: &[&[u64]]) -> MonomialIdeal {
        MonomialIdeal::from_exponents(n, gens).unwrap()
    }

    fn m(e: &[u64]) -> Monomial {
        Monomial::from_slice(e)
    }

    fn vs(idx: &[usize], n: usize) -> VariableSet {
        VariableSet::from_indices(idx, n).unwrap()
    }

    #[test]
    fn admissibility_examples() {
        let xy = ideal(2, &[&[1, 1]]);
        assert!(is_admissible(&xy, &m(&[0, 0]), &vs(&[0], 2)).unwrap());
        assert!(!is_admissible(&xy, &m(&[0, 0]), &vs(&[0, 1], 2)).unwrap());
        let box23 = ideal(2, &[&[2, 0], &[0, 3]]);
        assert!(is_admissible(&box23, &m(&[1, 2]), &vs(&[], 2)).unwrap());
        assert!(!is_admissible(&box23, &m(&[2, 0]), &vs(&[], 2)).unwrap());
        // alpha supported on S is never admissible
        assert!(!is_admissible(&xy, &m(&[1, 0]), &vs(&[0], 2)).unwrap());
    }

    #[test]
    fn standardness_examples() {
        let xy = ideal(2, &[&[1, 1]]);
        assert!(is_standard(&xy, &m(&[0, 0]), &vs(&[0], 2)).unwrap());
        assert!(!is_standard(&xy, &m(&[0, 0]), &vs(&[0, 1], 2)).unwrap());
        let box23 = ideal(2, &[&[2, 0], &[0, 3]]);
        assert!(is_standard(&box23, &m(&[1, 2]), &vs(&[], 2)).unwrap());
        assert!(is_standard(&box23, &m(&[0, 0]), &vs(&[], 2)).unwrap());
        let zero = MonomialIdeal::zero(3);
        assert!(is_standard(&zero, &m(&[0, 0, 0]), &VariableSet::full(3)).unwrap());
        assert!(!is_standard(&zero, &m(&[0, 0, 0]), &vs(&[0, 1], 3)).unwrap());
    }

    #[test]
    fn tester_agrees_with_restriction_route() {
        let i = ideal(3, &[&[2, 1, 0], &[0, 2, 1], &[1, 0, 3]]);
        let tester = PairTester::new(&i);
        for free in VariableSet::all_subsets(3) {
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        let alpha = m(&[a, b, c]);
                        assert_eq!(
                            tester.is_admissible(&alpha, &free).unwrap(),
                            is_admissible(&i, &alpha, &free).unwrap()
                        );
                        assert_eq!(
                            tester.is_standard(&alpha, &free).unwrap(),
                            is_standard(&i, &alpha, &free).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn census_small_examples() {
        let c = enumerate_standard_pairs(&ideal(3, &[&[1, 1, 0]])).unwrap();
        assert_eq!((c.adeg, c.deg, c.dim), (2, 2, 2));
        let mut got: Vec<_> = c.pairs.iter().map(|p| p.free.indices()).collect();
        got.sort();
        assert_eq!(got, vec![vec![0, 2], vec![1, 2]]);
        assert!(c.pairs.iter().all(|p| p.alpha.is_one()));

        let c = enumerate_standard_pairs(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!((c.adeg, c.deg, c.dim), (6, 6, 0));
        assert!(c.pairs.iter().all(|p| p.free.is_empty()));

        let c = enumerate_standard_pairs(&MonomialIdeal::zero(3)).unwrap();
        assert_eq!((c.adeg, c.deg, c.dim), (1, 1, 3));
        assert_eq!(c.pairs, vec![StandardPair {
            alpha: m(&[0, 0, 0]),
            free: VariableSet::full(3)
        }]);
    }

    #[test]
    fn census_matches_oracle_on_hand_examples() {
        for i in [
            ideal(2, &[&[2, 0], &[0, 3]]),
            ideal(2, &[&[1, 1]]),
            ideal(2, &[&[3, 1], &[1, 2]]),
            ideal(3, &[&[1, 1, 0], &[0, 2, 2]]),
            ideal(3, &[&[2, 1, 0], &[0, 2, 1], &[1, 0, 3]]),
            MonomialIdeal::zero(2),
        ] {
            let mut fast = enumerate_standard_pairs(&i).unwrap();
            fast.pairs.sort();
            let slow = brute_force_standard_pairs(&i, 6).unwrap();
            assert_eq!(fast, slow, "ideal {:?}", i);
        }
    }

    #[test]
    fn oracle_examples() {
        let c = brute_force_standard_pairs(&ideal(2, &[&[1, 1]]), 3).unwrap();
        let got: Vec<_> = c.pairs.iter().map(|p| (p.alpha.clone(), p.free.indices())).collect();
        assert_eq!(got, vec![(m(&[0, 0]), vec![0]), (m(&[0, 0]), vec![1])]);
        let c = brute_force_standard_pairs(&MonomialIdeal::zero(2), 3).unwrap();
        assert_eq!(c.adeg, 1);
        assert!(brute_force_standard_pairs(&MonomialIdeal::zero(2), 21).is_err());
    }

    #[test]
    fn census_guard_and_cap() {
        let i = ideal(2, &[&[1000, 0], &[0, 1000]]);
        let err = enumerate_standard_pairs_with(&i, &CensusOptions { guard: 10_000, pair_cap: 10 })
            .unwrap_err();
        assert!(err.is_guard());
        let c = enumerate_standard_pairs_with(&i, &CensusOptions { guard: DEFAULT_GUARD, pair_cap: 10 })
            .unwrap();
        assert_eq!(c.adeg, 1_000_000);
        assert_eq!(c.pairs.len(), 10);
        assert!(c.truncated);
        assert!(matches!(hilbert_sum(&c, 3), Err(Error::CensusTruncated(_))));
    }

    #[test]
    fn degree_and_adeg() {
        assert_eq!(degree(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap(), BigUint::from(6u32));
        assert_eq!(degree(&MonomialIdeal::zero(2)).unwrap(), BigUint::from(1u32));
        assert_eq!(arithmetic_degree(&MonomialIdeal::zero(2)).unwrap(), BigUint::from(1u32));
        assert_eq!(arithmetic_degree(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap(), BigUint::from(6u32));
        assert_eq!(degree(&ideal(3, &[&[1, 1, 0]])).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn hilbert_sum_examples() {
        let c = enumerate_standard_pairs(&ideal(2, &[&[1, 1]])).unwrap();
        assert_eq!(hilbert_sum(&c, 5).unwrap(), BigUint::from(2u32));
        let c = enumerate_standard_pairs(&ideal(3, &[&[1, 1, 0]])).unwrap();
        assert_eq!(hilbert_sum(&c, 2).unwrap(), BigUint::from(6u32));
        let c = enumerate_standard_pairs(&ideal(2, &[&[2, 0], &[0, 3]])).unwrap();
        assert_eq!(hilbert_sum(&c, 1).unwrap(), BigUint::from(2u32));
    }

    #[test]
    fn region_examples() {
        assert_eq!(region_l(5.0, 0.5, 1), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert!(region_l(5.0, 1.5, 1).is_empty());
        assert!(region_l(6.0, 2.0, 2).is_empty());
        assert!(region_l(1.0, 0.0, 3).is_empty());
        assert!(region_l(0.5, 0.0, 2).is_empty());
        // (a+1)(b+1) < 10 with each factor > 2: only 3*3 = 9
        assert_eq!(region_l(10.0, 2.0, 2), vec![vec![2, 2]]);
        for (f, h, t) in [(5.0, 0.5, 1), (100.0, 3.0, 2), (1000.0, 4.0, 3), (57.5, 0.2, 2)] {
            assert_eq!(region_l(f, h, t).len() as u128, region_l_size(f, h, t));
        }
    }

    #[test]
    fn embed_places_coordinates() {
        let t = vs(&[0, 2], 3);
        assert_eq!(embed(&[4, 5], &t), m(&[4, 0, 5]));
    }
}
