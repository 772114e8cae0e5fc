//! Finite compact metric structures and their invariants, over exact
//! rationals.
//!
//! The crate realizes, at desk scale, a toolkit for classifying finite
//! metric structures (finite metric spaces with named relations):
//!
//! - [`structure`]: the structures themselves, sup-metrics on tuples,
//!   covering radii, exact scaling.
//! - [`isometry`]: distance-matrix invariants `C_zeta`, canonical
//!   signatures, and an isometric-isomorphism decider with an independent
//!   brute-force oracle.
//! - [`bilipschitz`]: perturbation invariants `D_zeta`, dominance tests,
//!   and an exact optimal-distortion search.
//! - [`groups`]: finite groups encoded as structures — multiplication
//!   graphs, Roelcke metrics, weighted word metrics, one-point
//!   compactifications, translation graphs.
//! - [`heaps`]: heap algebra (ternary coset structure) and its
//!   correspondence with groups.
//! - [`stone`]: clopen-algebra encodings of discrete structures and their
//!   decoding via atoms.
//! - [`embeddings`]: Hilbert-cube embeddings and the interior squeeze map.
//! - [`json`]: the interchange formats, with canonical output.
//! - [`gen`]: seeded random corpora for tests and the CLI.
//!
//! Every operation is pure and deterministic; all types are immutable
//! after construction and safe to share across threads.

pub mod bilipschitz;
pub mod embeddings;
pub mod error;
pub mod gen;
pub mod groups;
pub mod heaps;
pub mod isometry;
pub mod json;
pub mod rational;
pub mod stone;
pub mod structure;
pub mod validate;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use rational::{format_rat, parse_rat, rat, rat_int, Rat};
pub use structure::{DistanceMatrix, MetricStructure, Radius, Relation};
pub use validate::{ValidationReport, Violation};
