//! Monomial ideals in canonical minimal form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, VariableSet};

/// A monomial ideal, represented by its minimal generating set `G(I)`.
///
/// Generators form a divisibility antichain sorted in graded lex order, so
/// two ideals are equal iff their structures are equal. The empty generator
/// list is the zero ideal. The unit ideal is not representable here; see
/// [`Restriction::Unit`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            generators: Vec::new(),
        }
    }

    /// Minimalizes `gens`; see [`minimalize`].
    pub fn new(n: usize, gens: Vec<Monomial>) -> Result<Self> {
        minimalize(gens, n)
    }

    /// Convenience constructor from exponent literals.
    pub fn from_exponents(n: usize, gens: &[&[u64]]) -> Result<Self> {
        let gens = gens
            .iter()
            .map(|e| Monomial::new(smallvec::SmallVec::from_slice(e)))
            .collect::<Result<Vec<_>>>()?;
        minimalize(gens, n)
    }

    pub(crate) fn from_minimal_unchecked(n: usize, generators: Vec<Monomial>) -> Self {
        MonomialIdeal { n, generators }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Membership: some minimal generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        Ok(self.contains_unchecked(m))
    }

    pub(crate) fn contains_unchecked(&self, m: &Monomial) -> bool {
        self.generators.iter().any(|g| g.divides_unchecked(m))
    }

    /// Smallest `e` with `x_i^e` among the generators, if any.
    pub fn pure_power(&self, i: usize) -> Option<u64> {
        self.generators
            .iter()
            .filter(|g| {
                g.exponents()
                    .iter()
                    .enumerate()
                    .all(|(j, &e)| j == i || e == 0)
            })
            .map(|g| g.get(i))
            .min()
    }

    /// Largest exponent of variable `i` over the generators (0 for the zero ideal).
    pub fn max_exponent(&self, i: usize) -> u64 {
        self.generators.iter().map(|g| g.get(i)).max().unwrap_or(0)
    }

    /// Maximum total degree among the generators.
    pub fn max_degree(&self) -> u64 {
        self.generators
            .iter()
            .map(|g| g.degree_unchecked())
            .max()
            .unwrap_or(0)
    }

    pub fn restrict(&self, t: &VariableSet) -> Result<Restriction> {
        restrict(self, t)
    }

    pub fn krull_dimension(&self) -> usize {
        krull_dimension(self)
    }

    pub fn to_json(&self) -> IdealJson {
        IdealJson {
            n: self.n,
            generators: self
                .generators
                .iter()
                .map(|g| g.exponents().to_vec())
                .collect(),
            metadata: None,
        }
    }

    pub fn from_json(json: &IdealJson) -> Result<Self> {
        if json.n == 0 {
            return Err(Error::Parse("an ideal needs at least one variable".into()));
        }
        let gens = json
            .generators
            .iter()
            .map(|e| {
                if e.len() != json.n {
                    return Err(Error::DimensionMismatch {
                        expected: json.n,
                        found: e.len(),
                    });
                }
                Monomial::new(smallvec::SmallVec::from_slice(e))
            })
            .collect::<Result<Vec<_>>>()?;
        minimalize(gens, json.n)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let json: IdealJson =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&json)
    }
}

/// Wire form: `{"n": <int>, "generators": [[e1,...,en], ...]}`, with an
/// optional `metadata` object that readers ignore.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdealJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
    pub n: usize,
    pub generators: Vec<Vec<u64>>,
}

/// Reduces a generating list to its canonical minimal form.
///
/// Fails with [`Error::UnitIdeal`] if any input monomial has degree zero.
pub fn minimalize(gens: Vec<Monomial>, n: usize) -> Result<MonomialIdeal> {
    for g in &gens {
        if g.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n(),
            });
        }
        if g.total_degree()? == 0 {
            return Err(Error::UnitIdeal);
        }
    }
    Ok(MonomialIdeal {
        n,
        generators: minimal_antichain(gens),
    })
}

/// Minimal elements under divisibility, sorted in graded lex order.
pub(crate) fn minimal_antichain(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    if gens.len() <= 1 {
        return gens;
    }
    let n = gens[0].n();
    let mut kept: Vec<Monomial> = match n {
        0 => vec![gens.swap_remove(0)],
        1 => vec![gens.into_iter().min().unwrap()],
        2 => {
            // Sweep by first exponent; a point survives iff its second
            // exponent drops below everything seen so far.
            gens.sort_unstable_by(|a, b| a.exponents().cmp(b.exponents()));
            let mut out = Vec::new();
            let mut best = u64::MAX;
            for g in gens {
                if g.get(1) < best {
                    best = g.get(1);
                    out.push(g);
                }
            }
            out
        }
        _ => {
            gens.sort_unstable();
            gens.dedup();
            let mut out: Vec<Monomial> = Vec::new();
            for g in gens {
                if !out.iter().any(|k| k.divides_unchecked(&g)) {
                    out.push(g);
                }
            }
            out
        }
    };
    kept.sort_unstable();
    kept
}

/// Result of substituting `x_i -> 1` for every variable outside `T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Restriction {
    /// Some generator was supported entirely off `T`.
    Unit { indices: Vec<usize> },
    Ideal(RestrictedIdeal),
}

/// An ideal of `K[x_i : i in T]`, re-indexed to `0..|T|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictedIdeal {
    pub ideal: MonomialIdeal,
    /// `indices[j]` is the original index of local variable `j`.
    pub indices: Vec<usize>,
}

impl Restriction {
    pub fn is_unit(&self) -> bool {
        matches!(self, Restriction::Unit { .. })
    }

    pub fn indices(&self) -> &[usize] {
        match self {
            Restriction::Unit { indices } => indices,
            Restriction::Ideal(r) => &r.indices,
        }
    }

    pub fn ideal(&self) -> Option<&MonomialIdeal> {
        match self {
            Restriction::Unit { .. } => None,
            Restriction::Ideal(r) => Some(&r.ideal),
        }
    }

    pub fn krull_dimension(&self) -> Result<usize> {
        self.ideal().map(krull_dimension).ok_or(Error::UnitIdeal)
    }

    /// Restricts further to `t`, given in original coordinates; `t` must be
    /// a subset of this restriction's variables.
    pub fn restrict(&self, t: &[usize]) -> Result<Restriction> {
        let own = self.indices();
        let local: Vec<usize> = t
            .iter()
            .map(|i| {
                own.iter().position(|j| j == i).ok_or_else(|| {
                    Error::Precondition(format!("variable {i} is not in the restriction"))
                })
            })
            .collect::<Result<_>>()?;
        match self {
            Restriction::Unit { .. } => Ok(Restriction::Unit { indices: t.to_vec() }),
            Restriction::Ideal(r) => {
                let inner = project_generators(r.ideal.generators(), &local);
                Ok(match inner {
                    None => Restriction::Unit { indices: t.to_vec() },
                    Some(gens) => Restriction::Ideal(RestrictedIdeal {
                        ideal: MonomialIdeal::from_minimal_unchecked(local.len(), gens),
                        indices: t.to_vec(),
                    }),
                })
            }
        }
    }
}

/// Projects onto `keep`; `None` if some projection is the unit monomial.
fn project_generators(gens: &[Monomial], keep: &[usize]) -> Option<Vec<Monomial>> {
    let mut out = Vec::with_capacity(gens.len());
    for g in gens {
        let p = if keep.is_empty() {
            Monomial::empty()
        } else {
            g.project(keep)
        };
        if p.is_one() {
            return None;
        }
        out.push(p);
    }
    Some(minimal_antichain(out))
}

/// `I|_T`: substitute `x_i -> 1` for `i` outside `T`.
pub fn restrict(ideal: &MonomialIdeal, t: &VariableSet) -> Result<Restriction> {
    if t.n() != ideal.n() {
        return Err(Error::DimensionMismatch {
            expected: ideal.n(),
            found: t.n(),
        });
    }
    let indices = t.indices();
    Ok(match project_generators(ideal.generators(), &indices) {
        None => Restriction::Unit { indices },
        Some(gens) => Restriction::Ideal(RestrictedIdeal {
            ideal: MonomialIdeal::from_minimal_unchecked(indices.len(), gens),
            indices,
        }),
    })
}

/// Krull dimension of `R/I`: the largest `|S|` such that no generator is
/// supported inside `S`. Brute force over all `2^n` subsets.
pub fn krull_dimension(ideal: &MonomialIdeal) -> usize {
    let n = ideal.n();
    assert!(n < 32, "krull_dimension enumerates 2^n subsets");
    let supports: Vec<u64> = ideal
        .generators()
        .iter()
        .map(|g| g.support().bits())
        .collect();
    (0..1u64 << n)
        .filter(|&s| supports.iter().all(|&g| g & !s != 0))
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
