//! Exact computation in extremal set theory around `(d,k,s)`-clusters.
//!
//! * [`family`]: k-subsets, k-uniform families, lex order, restrictions, juntas, constructions.
//! * [`shadow`]: upper shadows, monotone closures, biased measures, Kruskal–Katona checks.
//! * [`cluster`]: cluster and simplex predicates, finders, random clusters.
//! * [`junta_analysis`]: regularity, regular decompositions, junta equivalence, stability.
//! * [`solver`]: exact branch-and-bound for `f(d,k,s,n)`.
//! * [`cli`]: the `clusterkit` command line.

pub mod binom;
pub mod cli;
pub mod cluster;
pub mod error;
pub mod family;
pub mod junta_analysis;
pub mod rational;
pub mod shadow;
pub mod solver;

pub use error::{Error, Result};
pub use family::{KSubset, MeasureValue, SetFamily};
