//! Relational evaluation and answer counting.

mod acyclic;
mod brute;
mod enumerate;
mod pipeline;
mod relation;
mod structure;

use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

pub use acyclic::{boolean_acq, count_acyclic_qf};
pub use brute::{count_brute, count_brute_with, DEFAULT_BRUTE_BITS};
pub use enumerate::{enumerate_is, IndependentSets};
pub use pipeline::{count_cq_via_fractional, count_cq_via_ghd};
pub use relation::{Relation, Row, Value};
pub use structure::{QueryInstance, Structure, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Acyclic,
    Ghd,
    Fractional,
    Brute,
}

impl fmt::Display for CountMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMethod::Acyclic => "acyclic",
            CountMethod::Ghd => "ghd",
            CountMethod::Fractional => "fractional",
            CountMethod::Brute => "brute",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CountStats {
    /// Number of S-components.
    pub components: usize,
    /// Size of the edge cover of each component's free variables.
    pub cover_sizes: Vec<usize>,
    /// Tuple combinations tried while eliminating quantified variables.
    pub combinations: u64,
    /// Rows per bag of the final quantifier-free instance.
    pub bag_sizes: Vec<usize>,
    /// Largest relation or group table built along the way.
    pub peak_intermediate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountResult<C = BigUint> {
    pub count: C,
    pub method: CountMethod,
    pub stats: CountStats,
}
