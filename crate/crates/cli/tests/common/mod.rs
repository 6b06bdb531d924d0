#![allow(dead_code)]

use std::path::Path;
use std::process::{Command, Output};

use cqstar::format::{write_decomposition, write_query};
use cqstar::{Decomposition, DecompositionKind, Hypergraph, Node, Query, Rational};
use num_traits::One;

pub fn cqstar() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cqstar"))
}

pub fn run(args: &[&str]) -> Output {
    cqstar().args(args).output().expect("binary runs")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

/// One atom `E<id>` per edge, in edge order, so atom ordinals are edge ids.
/// `None` when some vertex lies in no edge.
pub fn as_query(h: &Hypergraph) -> Option<Query> {
    if !h.isolated_vertices().is_empty() {
        return None;
    }
    let atoms: Vec<(String, Vec<&str>)> =
        h.edges().iter().map(|e| (format!("E{}", e.id), e.vertices.iter().map(|&v| h.name(v)).collect())).collect();
    let atoms: Vec<(&str, &[&str])> = atoms.iter().map(|(p, a)| (p.as_str(), a.as_slice())).collect();
    Query::from_names("ans", &[], &atoms).ok()
}

#[derive(Clone, Copy, Debug)]
pub enum Mutation {
    BreakConnectedness,
    UncoverEdge,
    Unguard,
}

impl Mutation {
    pub const ALL: [Mutation; 3] = [Mutation::BreakConnectedness, Mutation::UncoverEdge, Mutation::Unguard];

    pub fn tag(self, kind: DecompositionKind) -> &'static str {
        match self {
            Mutation::BreakConnectedness => "CONNECTEDNESS",
            Mutation::UncoverEdge => "EDGE_UNCOVERED",
            Mutation::Unguard if kind == DecompositionKind::Fractional => "WEIGHT_DEFICIT",
            Mutation::Unguard => "GUARD_GAP",
        }
    }

    /// `None` when the hypergraph offers nothing to break.
    pub fn apply(self, h: &Hypergraph, d: &Decomposition) -> Option<Decomposition> {
        let mut d = d.clone();
        match self {
            Mutation::BreakConnectedness => {
                // a detached copy of v under an empty node
                let e = h.edges().iter().find(|e| !e.vertices.is_empty())?;
                let v = *e.vertices.iter().next()?;
                let root = d.root()?;
                let fresh = d.nodes.iter().map(|n| n.id).max()? + 1;
                d.nodes.push(Node::new(fresh, Some(root), Default::default(), Default::default()));
                let mut leaf = Node::new(fresh + 1, Some(fresh), [e.id].into(), [v].into());
                if d.kind == DecompositionKind::Fractional {
                    leaf.weights.insert(e.id, Rational::one());
                }
                d.nodes.push(leaf);
            }
            Mutation::UncoverEdge => {
                let e = h.edges().iter().max_by_key(|e| e.vertices.len())?;
                let v = *e.vertices.iter().next()?;
                for n in &mut d.nodes {
                    n.bag.remove(&v);
                }
            }
            Mutation::Unguard => {
                let n = d.nodes.iter_mut().find(|n| !n.bag.is_empty())?;
                let v = *n.bag.iter().next()?;
                let touching: Vec<usize> = h.edges().iter().filter(|e| e.vertices.contains(&v)).map(|e| e.id).collect();
                for e in touching {
                    n.guard.remove(&e);
                    n.weights.remove(&e);
                }
            }
        }
        Some(d)
    }
}

/// Writes `h` as a query and `d` beside it, runs `verify --format json`
/// and returns the exit code and the violation tags. `None` when `h` has
/// isolated vertices and so is no query.
pub fn cli_verify(dir: &Path, name: &str, h: &Hypergraph, d: &Decomposition) -> Option<(i32, Vec<String>)> {
    let q = as_query(h)?;
    let qp = dir.join(format!("{name}.cq"));
    let dp = dir.join(format!("{name}.json"));
    std::fs::write(&qp, write_query(&q)).unwrap();
    std::fs::write(&dp, write_decomposition(d, h)).unwrap();
    let out = run(&["verify", "--format", "json", "-q", qp.to_str().unwrap(), "--decomp", dp.to_str().unwrap()]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    let tags = doc["violations"]
        .as_array()
        .map(|vs| vs.iter().filter_map(|v| v["tag"].as_str().map(String::from)).collect())
        .unwrap_or_default();
    Some((out.status.code().unwrap_or(-1), tags))
}
