//! Small named instances used throughout the tests and the CLI docs.

use crate::hypergraph::{Hypergraph, SHypergraph};
use crate::query::Query;

/// Query text of the running example: nine free variables, eight
/// existentially quantified ones, eight atoms (`P2` used three times).
pub const EXAMPLE_QUERY: &str = "ans(v1,v2,v3,v4,v5,v6,v7,v8,v9) :- \
P1(v1,u1), P2(v2,u1,u2), P3(v2,v4,u2,u3), P4(v3,v4,v5,u3,u4,u5), \
P5(v4,v5,v6,v8), P6(v7,v8,u5,u6), P2(v6,v9,u7), P2(v8,v9,u8).";

pub fn example_query() -> Query {
    crate::format::parse_query(EXAMPLE_QUERY).expect("example query parses")
}

pub fn example_s_hypergraph() -> SHypergraph {
    SHypergraph::from_query(&example_query()).expect("example query is well formed")
}

/// `{a,b}, {b,c}, {c,a}`.
pub fn triangle() -> Hypergraph {
    Hypergraph::from_named_edges(&[&["a", "b"], &["b", "c"], &["c", "a"]])
}

/// Path `{a,b}, {b,c}, {c,d}`.
pub fn path4() -> Hypergraph {
    Hypergraph::from_named_edges(&[&["a", "b"], &["b", "c"], &["c", "d"]])
}

/// The star `z – y1..yn` with `S` = the leaves.
pub fn star(n: usize) -> SHypergraph {
    crate::generators::gen_g_star(n)
}
