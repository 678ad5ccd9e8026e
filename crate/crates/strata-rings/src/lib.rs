//! Finitely-presented graded rings for the cohomology of Deligne-Mumford
//! moduli spaces of complex and real rational curves.
//!
//! The crate builds the boundary-class presentations of these rings,
//! computes their graded dimensions by exact sparse linear algebra, and
//! cross-checks the results against closed Betti-number recursions and the
//! level-raising transfer homomorphisms.

pub mod betti;
pub mod cache;
pub mod ideals;
pub mod poly;
pub mod rank;
pub mod strata;
pub mod transfer;

pub use betti::{complex_betti, real_betti, real_h1_closed_form, BettiVector, Method};
pub use ideals::{complex_ideal, real_ideal, torsion_free_relation, IdealPresentation, RelationTag};
pub use poly::{count_monomials, monomials_of_degree, Alphabet, Monomial, Polynomial};
pub use rank::{ideal_contains, quotient_dims, slice_rank, DegreeSlice, RankConfig, RankContext};
pub use strata::{
    enumerate_generators, notcap_pair, notcap_triple, parallel, preceq, Family, GeneratorId,
    GroundSet, MarkSet, PartitionPair, TriplePartition,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("inhomogeneous polynomial: {0}")]
    Inhomogeneous(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("integer overflow: {0}")]
    Overflow(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
