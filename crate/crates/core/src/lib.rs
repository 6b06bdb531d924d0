//! Counting answers of conjunctive queries through hypergraph
//! decompositions and quantified star size.
//!
//! The crate is organised bottom-up: [`hypergraph`] holds hypergraphs,
//! S-hypergraphs and S-components; [`decomposition`] builds and verifies
//! join trees, GHDs, hingetree, tree and fractional decompositions;
//! [`starsize`] computes maximum independent sets and the S-star size;
//! [`engine`] evaluates and counts queries; [`generators`] produces test
//! instances; [`format`] reads and writes the text formats.
//!
//! Weights of fractional decompositions are generic over [`Weight`] and
//! counts over [`Count`]. The aliases below fix the exact defaults.

pub mod decomposition;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generators;
pub mod hypergraph;
pub mod query;
pub mod scalar;
pub mod starsize;

pub use decomposition::{verify, Decomposition, DecompositionKind, Node, Violation, WidthReport};
pub use engine::{QueryInstance, Relation, Structure};
pub use error::{Error, Result};
pub use hypergraph::{EdgeId, Hypergraph, SComponent, SHypergraph, VertexId, VertexSet};
pub use query::{Atom, Query, VarId};
pub use scalar::{Count, Weight};

/// Exact weights and widths.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision answer counts.
pub type ExactCount = num_bigint::BigUint;
/// Decomposition with exact rational weights.
pub type ExactDecomposition = Decomposition<Rational>;
/// Decomposition with floating-point weights, for quick inspection.
pub type FloatDecomposition = Decomposition<f64>;
