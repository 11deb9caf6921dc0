//! Random monomial ideals: sampling, invariants, standard pairs and the
//! hyperbolic lattice-point counts that govern them.

pub mod divisor;
pub mod error;
pub mod experiments;
pub mod ideal;
pub mod monomial;
pub mod pairs;
pub mod sampler;
pub mod staircase;

pub use error::{Error, Result};
pub use ideal::{krull_dimension, restrict, MonomialIdeal, Restriction};
pub use monomial::{divides, Monomial, VariableSet};
pub use pairs::{
    arithmetic_degree, degree, enumerate_standard_pairs, is_admissible, is_standard, PairCensus,
    StandardPair,
};
pub use sampler::{sample_ideal, ModelParams, PSpec};

/// Crate version recorded in experiment metadata.
pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");
