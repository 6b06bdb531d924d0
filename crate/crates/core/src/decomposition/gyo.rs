//! GYO ear removal: acyclicity test and join-tree construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::hypergraph::{Edge, EdgeId, Hypergraph, VertexSet};
use crate::scalar::Weight;

use super::{Decomposition, DecompositionKind, Node};

#[derive(Clone, Debug, PartialEq)]
pub enum GyoOutcome<W = crate::Rational> {
    Acyclic(Decomposition<W>),
    /// The reduced edges left when no ear can be removed.
    NotAcyclic { kernel: Hypergraph },
}

impl<W> GyoOutcome<W> {
    pub fn is_acyclic(&self) -> bool {
        matches!(self, GyoOutcome::Acyclic(_))
    }

    pub fn join_tree(self) -> Option<Decomposition<W>> {
        match self {
            GyoOutcome::Acyclic(d) => Some(d),
            GyoOutcome::NotAcyclic { .. } => None,
        }
    }
}

/// Runs GYO reduction on `h`.
///
/// Duplicate edges are merged into their lowest-id copy. Ears are removed
/// lowest id first, each becoming a child of the lowest-id edge containing
/// its reduced form. Nodes are labelled with edge ids. Separate connected
/// components end up chained through empty intersections. An edgeless
/// hypergraph yields a single empty node.
pub fn gyo_join_tree<W: Weight>(h: &Hypergraph) -> GyoOutcome<W> {
    let mut representative: BTreeMap<&VertexSet, EdgeId> = BTreeMap::new();
    for e in h.edges() {
        representative.entry(&e.vertices).or_insert(e.id);
    }
    let mut ids: Vec<EdgeId> = representative.values().copied().collect();
    ids.sort_unstable();

    if ids.is_empty() {
        let node = Node::new(0, None, BTreeSet::new(), VertexSet::new());
        return GyoOutcome::Acyclic(Decomposition::new(DecompositionKind::JoinTree, vec![node]));
    }

    let mut reduced: BTreeMap<EdgeId, VertexSet> =
        ids.iter().map(|&id| (id, h.edge(id).expect("representative exists").vertices.clone())).collect();
    let mut parent: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();

    loop {
        let mut changed = false;

        let mut occurrences: BTreeMap<usize, usize> = BTreeMap::new();
        for vs in reduced.values() {
            for &v in vs {
                *occurrences.entry(v).or_default() += 1;
            }
        }
        for vs in reduced.values_mut() {
            let before = vs.len();
            vs.retain(|v| occurrences[v] > 1);
            changed |= vs.len() != before;
        }

        if reduced.len() > 1 {
            let ear = reduced.iter().find_map(|(&i, vi)| {
                reduced.iter().find(|&(&j, vj)| j != i && vi.is_subset(vj)).map(|(&j, _)| (i, j))
            });
            if let Some((i, j)) = ear {
                reduced.remove(&i);
                parent.insert(i, j);
                changed = true;
            }
        }

        if reduced.len() == 1 || !changed {
            break;
        }
    }

    if reduced.len() > 1 {
        let edges = reduced.into_iter().map(|(id, vertices)| Edge { id, vertices }).collect::<Vec<_>>();
        let vertices = edges.iter().flat_map(|e| e.vertices.iter().copied()).collect();
        return GyoOutcome::NotAcyclic { kernel: h.with_parts(vertices, edges) };
    }

    let nodes = ids
        .iter()
        .map(|&id| {
            let bag = h.edge(id).expect("representative exists").vertices.clone();
            Node::new(id, parent.get(&id).copied(), [id].into_iter().collect(), bag)
        })
        .collect();
    GyoOutcome::Acyclic(Decomposition::new(DecompositionKind::JoinTree, nodes))
}
