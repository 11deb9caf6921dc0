//! Monomials as exponent vectors and variable subsets as bitmasks.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Exponent storage; ideals in up to four variables stay inline.
pub type Exponents = SmallVec<[u64; 4]>;

/// A monomial `x^alpha` in `n` variables, stored as its exponent vector.
///
/// The ordering is graded lexicographic: total degree first, ties broken by
/// comparing exponent vectors lexicographically from the first variable.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial {
    exps: Exponents,
}

impl Monomial {
    pub fn new(exps: impl Into<Exponents>) -> Result<Self> {
        let exps = exps.into();
        if exps.is_empty() {
            return Err(Error::Precondition(
                "a monomial needs at least one variable".into(),
            ));
        }
        let m = Monomial { exps };
        m.total_degree()?;
        Ok(m)
    }

    /// Builds a monomial from a slice. Panics on an empty slice or on a
    /// total degree that overflows `u64`; intended for literals.
    pub fn from_slice(exps: &[u64]) -> Self {
        Monomial::new(Exponents::from_slice(exps)).expect("valid monomial literal")
    }

    /// Monomial over zero variables; only used for restrictions to the
    /// empty variable set.
    pub(crate) fn empty() -> Self {
        Monomial {
            exps: Exponents::new(),
        }
    }

    pub(crate) fn from_exps_unchecked(exps: Exponents) -> Self {
        Monomial { exps }
    }

    pub fn one(n: usize) -> Self {
        Monomial {
            exps: SmallVec::from_elem(0, n),
        }
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exps
    }

    pub fn get(&self, i: usize) -> u64 {
        self.exps[i]
    }

    /// `|alpha|`, with overflow reported as an error.
    pub fn total_degree(&self) -> Result<u64> {
        self.exps
            .iter()
            .try_fold(0u64, |acc, &e| acc.checked_add(e))
            .ok_or(Error::Overflow("total degree"))
    }

    pub(crate) fn degree_unchecked(&self) -> u64 {
        self.exps.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn support(&self) -> VariableSet {
        let mut s = VariableSet::empty(self.n());
        for (i, &e) in self.exps.iter().enumerate() {
            if e > 0 {
                s.insert(i);
            }
        }
        s
    }

    /// `prod (alpha_i + 1)`, the number of monomials dividing `x^alpha`.
    pub fn divisor_product(&self) -> Result<u128> {
        self.exps.iter().try_fold(1u128, |acc, &e| {
            acc.checked_mul(e as u128 + 1)
                .ok_or(Error::Overflow("divisor product"))
        })
    }

    /// Copy with coordinate `i` set to zero.
    pub fn with_zeroed(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] = 0;
        Monomial { exps }
    }

    /// Keeps only the coordinates listed in `indices`, in that order.
    pub fn project(&self, indices: &[usize]) -> Monomial {
        Monomial {
            exps: indices.iter().map(|&i| self.exps[i]).collect(),
        }
    }

    pub(crate) fn divides_unchecked(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }
}

/// Componentwise order: `a` divides `b` iff `a_i <= b_i` for every `i`.
pub fn divides(a: &Monomial, b: &Monomial) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    Ok(a.divides_unchecked(b))
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree_unchecked()
            .cmp(&other.degree_unchecked())
            .then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps.as_slice())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            match e {
                1 => write!(f, "x{}", i + 1)?,
                _ => write!(f, "x{}^{}", i + 1, e)?,
            }
        }
        Ok(())
    }
}

/// A subset of the variables `{0, ..., n-1}`, stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariableSet {
    bits: u64,
    n: usize,
}

impl VariableSet {
    pub const MAX_VARS: usize = 64;

    pub fn empty(n: usize) -> Self {
        assert!(n <= Self::MAX_VARS, "at most 64 variables are supported");
        VariableSet { bits: 0, n }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        s.bits = Self::mask(n);
        s
    }

    pub fn from_bits(bits: u64, n: usize) -> Result<Self> {
        if n > Self::MAX_VARS || bits & !Self::mask(n) != 0 {
            return Err(Error::Precondition(format!(
                "bitmask {bits:#b} is not a subset of {n} variables"
            )));
        }
        Ok(VariableSet { bits, n })
    }

    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self> {
        let mut s = Self::empty(n);
        for &i in indices {
            if i >= n {
                return Err(Error::Precondition(format!(
                    "variable index {i} out of range for {n} variables"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    fn mask(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.n && self.bits >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.n);
        self.bits |= 1 << i;
    }

    pub fn with(mut self, i: usize) -> Self {
        self.insert(i);
        self
    }

    pub fn complement(&self) -> Self {
        VariableSet {
            bits: !self.bits & Self::mask(self.n),
            n: self.n,
        }
    }

    pub fn is_subset(&self, other: &VariableSet) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn indices(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&i| self.contains(i))
    }

    /// All subsets of `{0, ..., n-1}`, ordered by size and then by bitmask.
    pub fn all_subsets(n: usize) -> Vec<VariableSet> {
        assert!(n < 32, "subset enumeration is limited to fewer than 32 variables");
        let mut subsets: Vec<VariableSet> = (0..1u64 << n)
            .map(|bits| VariableSet { bits, n })
            .collect();
        subsets.sort_by_key(|s| (s.len(), s.bits));
        subsets
    }
}

impl fmt::Debug for VariableSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
